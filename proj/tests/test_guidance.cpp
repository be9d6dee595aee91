#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "vags/guidance.hpp"

using namespace vags;

namespace {

SchedulerParams vags_params(double lambda, double kappa) { return {SchedulerKind::Vags, lambda, kappa}; }

StepContext ctx_sigma(double sigma, std::optional<double> s) { return StepContext::at(5, 1.0 - sigma, 25, s); }

} // namespace

TEST_CASE("vags effective scale examples") {
    for (double s : {-1.0, -0.3, 0.0, 0.8, 1.0}) CHECK(effective_scale(vags_params(7.0, 1.0), ctx_sigma(0.5, s)) == 7.0);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
        const double sigma = unit(rng), s = 2.0 * unit(rng) - 1.0;
        CHECK(effective_scale(vags_params(7.0, 0.0), ctx_sigma(sigma, s)) == 7.0);
    }

    CHECK(effective_scale(vags_params(7.0, 1.0), ctx_sigma(1.0, 1.0)) ==
          doctest::Approx(19.0279727992133166).epsilon(1e-14));
}

TEST_CASE("baseline schedulers") {
    SUBCASE("fixed ignores context") {
        const SchedulerParams fixed{SchedulerKind::Fixed, 4.5, 2.0};
        CHECK(effective_scale(fixed, ctx_sigma(0.9, std::nullopt)) == 4.5);
        CHECK(effective_scale(fixed, ctx_sigma(0.1, 0.7)) == 4.5);
    }
    SUBCASE("monotone is the temporal-only law") {
        const SchedulerParams mono{SchedulerKind::Monotone, 13.5, 0.9};
        CHECK(effective_scale(mono, ctx_sigma(0.5, std::nullopt)) == 13.5);
        CHECK(effective_scale(mono, ctx_sigma(1.0, std::nullopt)) ==
              doctest::Approx(33.2046420006188205).epsilon(1e-14));
        CHECK(effective_scale(mono, ctx_sigma(0.2, std::nullopt)) < effective_scale(mono, ctx_sigma(0.8, std::nullopt)));
    }
    SUBCASE("interval falls back to the conditional velocity outside the window") {
        SchedulerParams interval{SchedulerKind::Interval, 6.0, 0.0};
        CHECK(effective_scale(interval, StepContext::at(3, 0.5, 10)) == 6.0);
        CHECK(effective_scale(interval, StepContext::at(3, 0.2, 10)) == 6.0);
        CHECK(effective_scale(interval, StepContext::at(3, 0.8, 10)) == 6.0);
        CHECK(effective_scale(interval, StepContext::at(3, 0.1, 10)) == 1.0);
        CHECK(effective_scale(interval, StepContext::at(3, 0.95, 10)) == 1.0);
    }
    SUBCASE("zero-init zeroes the first iterations") {
        SchedulerParams zero{SchedulerKind::ZeroInit, 7.0, 0.0};
        CHECK(effective_scale(zero, StepContext::at(25, 1.0, 25)) == 0.0);
        CHECK(effective_scale(zero, StepContext::at(24, 0.95, 25)) == 7.0);
        zero.zero_steps = 3;
        CHECK(effective_scale(zero, StepContext::at(23, 0.9, 25)) == 0.0);
        CHECK(effective_scale(zero, StepContext::at(22, 0.85, 25)) == 7.0);
        // Editing loops start below N.
        zero.zero_steps = 1;
        CHECK(effective_scale(zero, StepContext::at(33, 0.65, 33)) == 0.0);
        CHECK(effective_scale(zero, StepContext::at(32, 0.63, 33)) == 7.0);
    }
}

TEST_CASE("vags contract") {
    CHECK_THROWS_AS(effective_scale(vags_params(7.0, 1.0), ctx_sigma(0.3, std::nullopt)), ContractError);
    CHECK_THROWS_AS(effective_scale(vags_params(7.0, 1.0), ctx_sigma(0.3, 1.5)), ContractError);
    CHECK(StepContext::at(4, 0.3, 10).sigma == 1.0 - 0.3);
}

TEST_CASE("scheduler params validation") {
    CHECK_THROWS_AS((SchedulerParams{SchedulerKind::Vags, 7.0, -0.1}.validate()), ConfigError);
    CHECK_THROWS_AS((SchedulerParams{SchedulerKind::Fixed, -1.0, 0.0}.validate()), ConfigError);
    SchedulerParams interval{SchedulerKind::Interval, 3.0, 0.0};
    interval.interval_lo = 0.6;
    interval.interval_hi = 0.4;
    CHECK_THROWS_AS(interval.validate(), ConfigError);
    SchedulerParams zero{SchedulerKind::ZeroInit, 3.0, 0.0};
    zero.zero_steps = 0;
    CHECK_THROWS_AS(zero.validate(), ConfigError);

    for (auto kind : {SchedulerKind::Fixed, SchedulerKind::Vags, SchedulerKind::Monotone, SchedulerKind::Interval,
                      SchedulerKind::ZeroInit})
        CHECK(parse_scheduler_kind(to_string(kind)) == kind);
    CHECK_THROWS_AS(parse_scheduler_kind("cosine"), ConfigError);
}

TEST_CASE("vags bound, neutrality and quadrant signs") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double kappa : {0.5, 0.9, 1.0, 2.0}) {
        const double lambda = 7.0;
        for (int k = 0; k < 100'000; ++k) {
            const double sigma = unit(rng), s = 2.0 * unit(rng) - 1.0;
            const double scale = effective_scale(vags_params(lambda, kappa), ctx_sigma(sigma, s));
            REQUIRE(scale >= lambda * std::exp(-kappa));
            REQUIRE(scale <= lambda * std::exp(kappa));
            REQUIRE(std::abs(effective_scale(vags_params(lambda, kappa), ctx_sigma(0.5, s)) - lambda) <= 1e-12);
        }
        for (int a = 0; a <= 20; ++a)
            for (int b = 0; b <= 20; ++b) {
                const double sigma = a / 20.0, s = -1.0 + b / 10.0;
                const double product = (2.0 * sigma - 1.0) * s;
                if (product == 0.0) continue;
                const double log_ratio = std::log(effective_scale(vags_params(lambda, kappa), ctx_sigma(sigma, s)) / lambda);
                CHECK((log_ratio > 0.0) == (product > 0.0));
                CHECK(log_ratio != 0.0);
            }
    }
}

TEST_CASE("cfg combine") {
    const auto u = make_latent({0.3, -1.0, 2.0});
    const auto c = make_latent({1.5, 0.5, -0.5});
    CHECK(cfg_combine(u, c, 1.0) == c);
    CHECK(cfg_combine(u, c, 0.0) == u);
    CHECK(cfg_combine(make_latent({0.0, 0.0}), make_latent({1.0, 0.0}), 7.0) == make_latent({7.0, 0.0}));
    CHECK_THROWS_AS(cfg_combine(u, make_latent({1.0}), 2.0), DimensionError);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> scale(-10.0, 10.0);
    for (int k = 0; k < 1000; ++k) {
        const auto uu = testing::random_latent(rng, 8), cc = testing::random_latent(rng, 8);
        const double a = scale(rng), b = scale(rng);
        const LatentVector lhs = cfg_combine(uu, cc, a) + cfg_combine(uu, cc, b) - uu;
        CHECK((lhs - cfg_combine(uu, cc, a + b)).cwiseAbs().maxCoeff() <= 1e-12);
    }
}
