#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gem/eit.hpp"
#include "gem/errors.hpp"
#include "gem/metrics.hpp"
#include "support.hpp"

using namespace gem;

namespace {

PulseSpec modulated_pulse()
{
    PulseSpec p = make_gaussian(7.0, 2.5);
    p.kind = PulseKind::modulated;
    p.mod_freq = 2.0 * std::numbers::pi * 0.3;
    p.mod_depth = 0.8;
    return p;
}

/// Control held at omega_c0 for the whole run.
EitConfig constant_control(double omega)
{
    EitConfig c;
    c.omega_c0 = omega;
    c.switch_down = 1e6;
    c.switch_up = 2e6;
    return c;
}

double peak_time(std::span<const complex> s, const Grid& grid)
{
    std::size_t best = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (std::abs(s[i]) > std::abs(s[best]))
            best = i;
    return grid.t(best);
}

} // namespace

TEST_SUITE("eit_reference")
{
    TEST_CASE("control schedule and delay")
    {
        const EitConfig c;
        CHECK(c.control(0.0) == doctest::Approx(50.0).epsilon(1e-6));
        CHECK(c.control(14.0) == doctest::Approx(25.0).epsilon(1e-6));
        CHECK(c.control(45.0) < 1e-6);
        CHECK(c.control(75.0) == doctest::Approx(25.0).epsilon(1e-6));
        CHECK(c.control(150.0) == doctest::Approx(50.0).epsilon(1e-6));
        CHECK(c.group_delay(50.0) == doctest::Approx(2.0));
        CHECK(constant_control(25.0).control(100.0) == doctest::Approx(25.0));
    }

    TEST_CASE("config validation")
    {
        EitConfig c;
        CHECK_NOTHROW(c.validate());
        c.switch_up = 10.0;
        CHECK_THROWS_AS(c.validate(), config_error);
        c = EitConfig{};
        c.n_atoms = 0.0;
        CHECK_THROWS_AS(c.validate(), config_error);
        c = EitConfig{};
        c.gamma_e = -1.0;
        CHECK_THROWS_AS(c.validate(), config_error);
    }

    TEST_CASE("narrowband probe is transmitted under constant control")
    {
        const auto c = constant_control(50.0);
        const auto r = run_eit(c, make_gaussian(40.0, 12.0));
        const double in = test::max_abs(r.input_series);
        const double out = test::max_abs(r.output_series);
        CHECK(out / in > 0.95);
        CHECK(out / in < 1.0 + 1e-6);
        CHECK(peak_time(r.output_series, c.grid) - 40.0 ==
              doctest::Approx(10.0 * c.group_delay(50.0)).epsilon(0.02));
    }

    TEST_CASE("transit delay scales as 1 / omega^2")
    {
        const auto pulse = make_gaussian(7.0, 2.5);
        const auto fast = run_eit(constant_control(50.0), pulse);
        const auto slow = run_eit(constant_control(25.0), pulse);
        const Grid& g = fast.grid();
        const double d_fast = peak_time(fast.output_series, g) - 7.0;
        const double d_slow = peak_time(slow.output_series, g) - 7.0;
        CHECK(d_slow / d_fast == doctest::Approx(4.0).epsilon(0.1));
    }

    TEST_CASE("storage: frozen spin wave, profile mapping, recall")
    {
        const EitConfig c;
        const auto r = run_eit(c, modulated_pulse(), {.history_stride = 50});
        const Grid& g = r.grid();
        CHECK(r.control.size() == g.nt);
        CHECK(r.spin_wave.rows() == r.row_index.size());

        const auto a = r.spin_wave.row(r.row(g.time_index(30.0)));
        const auto b = r.spin_wave.row(r.row(g.time_index(60.0)));
        double diff = 0.0, norm = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            diff += std::pow(std::abs(b[j]) - std::abs(a[j]), 2);
            norm += std::norm(a[j]);
        }
        CHECK(std::sqrt(diff / norm) < 0.01);

        const auto pol = eit_polariton(r, r.control);
        const double corr =
            stored_profile_correlation(r, pol.row(r.row(g.time_index(45.0))));
        CHECK(corr > 0.95);

        const double sigma = output_energy(r, {c.switch_up, g.t_max}) /
                             input_energy(r, {0.0, g.t_max});
        CHECK(sigma > 0.9);
        CHECK(sigma <= 1.0);

        const auto again = run_eit(c, modulated_pulse(), {.history_stride = 50});
        CHECK(again.output_series == r.output_series);
    }

    TEST_CASE("polariton limits")
    {
        EitConfig c;
        c.grid = Grid{0.0, 1.0, 5, 1.0, 3};
        EitRecord r;
        r.config = c;
        r.row_index = {0};
        const std::vector<complex> e{1.0, {0.0, 2.0}, 0.5, 0.0, -1.0};
        const std::vector<complex> s{0.1, 0.2, {0.0, -0.3}, 0.4, 0.0};
        r.e_field.append_row(e);
        r.spin_wave.append_row(s);
        r.polarisation.append_row(std::vector<complex>(5));

        const std::vector<double> bright(3, 1e12);
        const auto p = eit_polariton(r, bright);
        for (std::size_t j = 0; j < 5; ++j)
            CHECK(std::abs(p(0, j) - e[j]) < 1e-6);

        const std::vector<double> dark(3, 0.0);
        const auto q = eit_polariton(r, dark);
        for (std::size_t j = 0; j < 5; ++j)
            CHECK(std::abs(q(0, j) + std::sqrt(c.n_atoms) * s[j]) < 1e-12);

        const std::vector<double> wrong(2, 0.0);
        CHECK_THROWS(eit_polariton(r, wrong));
    }
}
