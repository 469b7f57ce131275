#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gem/errors.hpp"
#include "gem/field.hpp"
#include "support.hpp"

using namespace gem;
using gem::test::eta0;

namespace {

std::string error_path(const auto& f)
{
    try {
        f();
    } catch (const config_error& e) {
        return e.path();
    }
    return "<no error>";
}

complex inner(const PulseSpec& a, const PulseSpec& b, const Grid& grid)
{
    const auto x = a.sample(grid);
    const auto y = b.sample(grid);
    complex s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        s += std::conj(x[i]) * y[i];
    return s * grid.dt();
}

} // namespace

TEST_SUITE("core_model")
{
    TEST_CASE("grid spacing and invariants")
    {
        const Grid g{-3.0, 3.0, 7, 10.0, 11};
        CHECK(g.dz() == doctest::Approx(1.0));
        CHECK(g.dt() == doctest::Approx(1.0));
        CHECK(g.z(6) == doctest::Approx(3.0));
        CHECK(g.time_index(4.4) == 4);
        CHECK(g.time_index(-1.0) == 0);
        CHECK(g.time_index(99.0) == 10);

        CHECK(error_path([] { Grid{1.0, 1.0, 8, 1.0, 8}.validate(); }) ==
              "grid.z_max");
        CHECK(error_path([] { Grid{0.0, 1.0, 1, 1.0, 8}.validate(); }) ==
              "grid.nz");
        CHECK(error_path([] { Grid{0.0, 1.0, 8, 1.0, 1}.validate(); }) ==
              "grid.nt");
        CHECK(error_path([] { Grid{0.0, 1.0, 8, 0.0, 8}.validate(); }) ==
              "grid.t_max");
    }

    TEST_CASE("nyquist guard is an error naming the inequality")
    {
        Grid g;
        const std::size_t need = static_cast<std::size_t>(
                                     std::ceil(eta0 * 6.0 * 200.0 /
                                               std::numbers::pi)) +
                                 2;
        CHECK(g.required_nz(eta0) == need);
        g.nz = need;
        CHECK_NOTHROW(g.validate_nyquist(eta0));
        g.nz = need - 1;
        try {
            g.validate_nyquist(eta0);
            FAIL("expected config_error");
        } catch (const config_error& e) {
            CHECK(e.path() == "grid.nz");
            CHECK(std::string(e.what()).find(
                      "nz >= ceil(eta_max * L * t_max / pi) + 2") !=
                  std::string::npos);
        }
        auto c = make_gem_config(g, 8.0, 1.0, 80.0);
        CHECK_THROWS_AS(c.validate(), config_error);
    }

    TEST_CASE("config invariants and optical depth")
    {
        auto c = make_gem_config(Grid{}, 8.0, 3.3, 80.0);
        CHECK(c.stark.eta0 == doctest::Approx(eta0));
        CHECK(c.optical_depth() == doctest::Approx(3.3).epsilon(1e-14));
        CHECK(c.bandwidth() / (2.0 * std::numbers::pi) ==
              doctest::Approx(8.0));
        CHECK_NOTHROW(c.validate());
        CHECK(with_optical_depth(c, 0.5).optical_depth() ==
              doctest::Approx(0.5).epsilon(1e-14));

        auto bad = c;
        bad.g = 0.0;
        CHECK(error_path([&] { bad.validate(); }) == "config.g");
        CHECK_NOTHROW(bad.validate("config", true));
        bad = c;
        bad.linear_density = -1.0;
        CHECK(error_path([&] { bad.validate(); }) == "config.linear_density");
        bad = c;
        bad.gamma = -0.1;
        CHECK(error_path([&] { bad.validate(); }) == "config.gamma");
        bad = c;
        bad.stark.ramp_tau = -1.0;
        CHECK(error_path([&] { bad.validate(); }) == "config.stark.ramp_tau");
        bad = c;
        bad.stark.freeze_intervals = {{20.0, 10.0}};
        CHECK(error_path([&] { bad.validate(); }).starts_with(
            "config.stark.freeze_intervals"));
    }

    TEST_CASE("stark profile")
    {
        StarkProfile s;
        s.eta0 = 2.0;
        s.switch_time = 80.0;
        CHECK(s.eval(10.0) == 2.0);
        CHECK(s.eval(90.0) == -2.0);

        s.ramp_tau = 58.0;
        CHECK(s.eval(80.0) == doctest::Approx(0.0));
        CHECK(s.eval(20.0) == doctest::Approx(2.0 * std::tanh(60.0 / 58.0)));
        CHECK(s.eval(80.0 - 1e-9) > 0.0);
        CHECK(s.eval(80.0 + 1e-9) < 0.0);

        s.freeze_intervals = {{10.0, 20.0}};
        CHECK(s.eval(15.0) == 0.0);
        CHECK(s.max_abs_slope() == doctest::Approx(2.0));

        s.delta_offset = 0.3;
        CHECK(s.detuning(1.5, 30.0) == doctest::Approx(s.eval(30.0) * 1.5));
        CHECK(s.detuning(1.5, 100.0) ==
              doctest::Approx(s.eval(100.0) * 1.5 - 0.3));
    }

    TEST_CASE("stark integrals match quadrature")
    {
        for (double ramp : {0.0, 58.0, 3.0}) {
            StarkProfile s;
            s.eta0 = 1.7;
            s.switch_time = 60.0;
            s.ramp_tau = ramp;
            s.delta_offset = 0.25;
            s.freeze_intervals = {{20.0, 30.0}, {90.0, 95.0}};
            // Cells aligned with every jump of the profile.
            const int n = 480000;
            const double t_end = 120.0;
            const double h = t_end / n;
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                acc += s.eval((i + 0.5) * h) * h;
            CHECK(s.slope_integral(t_end) == doctest::Approx(acc).epsilon(1e-6));
            CHECK(s.offset_integral(t_end) ==
                  doctest::Approx(0.25 * 60.0).epsilon(1e-12));
            CHECK(s.offset_integral(50.0) == 0.0);
        }
    }

    TEST_CASE("plane-wave mode constructor")
    {
        const auto u0 = make_plane_wave_mode(0L, 35.0, 45.0);
        CHECK(std::abs(u0.evaluate(40.0) - 1.0 / std::sqrt(10.0)) < 1e-15);
        CHECK(u0.evaluate(34.9) == complex(0.0));
        CHECK(u0.evaluate(45.1) == complex(0.0));

        const auto u1 = make_plane_wave_mode(1L, 35.0, 45.0);
        const double w = 2.0 * std::numbers::pi / 10.0;
        CHECK(u1.mode_frequency() == doctest::Approx(w));
        CHECK(std::abs(u1.evaluate(37.0) -
                       std::polar(1.0 / std::sqrt(10.0), w * 37.0)) < 1e-14);

        CHECK_THROWS_AS(make_plane_wave_mode(1.5, 35.0, 45.0), config_error);
        CHECK_NOTHROW(make_plane_wave_mode(2.0, 35.0, 45.0));
        CHECK_THROWS_AS(make_plane_wave_mode(1L, 45.0, 45.0), config_error);
        CHECK_THROWS_AS(make_plane_wave_mode(1L, 45.0, 35.0), config_error);
    }

    TEST_CASE("plane-wave modes are orthonormal on the grid")
    {
        // 10 us window sampled with 2000 intervals; half-open sum is exact.
        const Grid grid{-3.0, 3.0, 8, 10.0, 2001};
        for (long m : {-3L, 0L, 1L, 7L}) {
            for (long n : {-3L, 0L, 1L, 2L, 7L}) {
                const complex ip = inner(make_plane_wave_mode(m, 0.0, 10.0),
                                         make_plane_wave_mode(n, 0.0, 10.0),
                                         grid);
                CHECK(std::abs(ip - (m == n ? 1.0 : 0.0)) < 1e-10);
            }
        }
    }

    TEST_CASE("mode counting")
    {
        CHECK(count_modes(10.0, 8.0) == 80);
        CHECK(count_modes(1e-6, 8.0) == 0);
        CHECK(count_modes(40.0, 8.0) == 320);
        CHECK(count_modes(60.0, 8.0) == 480);
        CHECK_THROWS_AS(count_modes(0.0, 8.0), config_error);
        CHECK_THROWS_AS(count_modes(10.0, -1.0), config_error);

        // Brute force: modes with |w_n| <= bandwidth / 2.
        for (double T : {10.0, 40.0}) {
            long brute = 0;
            for (long n = -1000; n < 1000; ++n)
                if (n / T >= -8.0 / 2.0 && n / T < 8.0 / 2.0)
                    ++brute;
            CHECK(brute == count_modes(T, 8.0));
        }

        const auto modes = in_band_modes(10.0, 8.0);
        REQUIRE(modes.size() == 80);
        CHECK(modes.front() == -40);
        CHECK(modes.back() == 39);
        CHECK(in_band_modes(0.9, 8.0).size() == 7);
        CHECK(in_band_modes(0.9, 8.0).front() == -3);
    }

    TEST_CASE("amplitude scaling is exact")
    {
        const complex c{0.3, -1.7};
        for (auto p : {make_gaussian(5.0, 1.5),
                       make_plane_wave_mode(3L, 35.0, 45.0)}) {
            const auto q = p.scaled(c);
            for (double t : {0.0, 4.0, 5.0, 36.0, 44.5})
                CHECK(q.evaluate(t) == c * p.evaluate(t));
        }
    }

    TEST_CASE("pulse shapes and validation")
    {
        const auto g = make_gaussian(5.0, 1.5, 2.0);
        CHECK(std::abs(g.evaluate(5.0)) == doctest::Approx(2.0));
        CHECK(std::abs(g.evaluate(6.5)) == doctest::Approx(2.0 / std::exp(1.0)));

        PulseSpec m = g;
        m.kind = PulseKind::modulated;
        m.mod_freq = 1.2;
        m.mod_depth = 0.8;
        CHECK(m.evaluate(7.0) ==
              g.evaluate(7.0) * (1.0 + 0.8 * std::cos(1.2 * 7.0)));

        // Finite, positive energy.
        const Grid grid{-3.0, 3.0, 8, 20.0, 20001};
        const double e = trapezoid_energy(g.sample(grid), grid.dt());
        CHECK(e == doctest::Approx(4.0 * 1.5 * std::sqrt(std::numbers::pi / 2.0))
                       .epsilon(1e-6));

        PulseSpec bad = g;
        bad.width = -1.0;
        CHECK(error_path([&] { bad.validate(); }) == "pulse.width");
        bad = g;
        bad.amplitude = 0.0;
        CHECK(error_path([&] { bad.validate(); }) == "pulse.amplitude");
    }

    TEST_CASE("plane-wave completeness for a band-limited signal")
    {
        // Band-limited test signal on [t1, t2], projected on in-band modes.
        const double t1 = 35.0, t2 = 45.0;
        const Grid grid{-3.0, 3.0, 8, 50.0, 5001};
        const auto [i1, i2] = window_indices(grid, {t1, t2});
        std::vector<complex> f(grid.nt);
        for (std::size_t i = i1; i < i2; ++i) {
            const double t = grid.t(i) - t1;
            f[i] = std::polar(1.0, 2.0 * std::numbers::pi * 0.7 * t) +
                   0.5 * std::polar(1.0, -2.0 * std::numbers::pi * 2.3 * t) +
                   complex(0.0, 0.2) +
                   2.0 * std::exp(-std::pow((t - 5.0) / 1.0, 2));
        }
        std::vector<complex> rebuilt(grid.nt);
        for (long n : in_band_modes(t2 - t1, 8.0)) {
            const auto u = make_plane_wave_mode(n, t1, t2).sample(grid);
            complex c = 0.0;
            for (std::size_t i = i1; i < i2; ++i)
                c += std::conj(u[i]) * f[i] * grid.dt();
            for (std::size_t i = i1; i < i2; ++i)
                rebuilt[i] += c * u[i];
        }
        double err = 0.0, norm = 0.0;
        for (std::size_t i = i1; i < i2; ++i) {
            err += std::norm(rebuilt[i] - f[i]);
            norm += std::norm(f[i]);
        }
        CHECK(std::sqrt(err / norm) < 0.01);
    }

    TEST_CASE("trapezoid energy and windows")
    {
        const Grid grid{0.0, 1.0, 2, 10.0, 11};
        std::vector<complex> f(11, complex(0.0, 2.0));
        CHECK(trapezoid_energy(f, grid.dt()) == doctest::Approx(40.0));
        CHECK(trapezoid_energy(f, grid.dt(), 2, 4) == doctest::Approx(8.0));
        const auto [a, b] = window_indices(grid, {2.5, 6.0});
        CHECK(a == 3);
        CHECK(b == 6);
        CHECK_THROWS(window_indices(grid, {6.0, 2.0}));
        CHECK_THROWS(window_indices(grid, {20.0, 30.0}));
    }
}
