#include "gpftk/ellcurve.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>

using namespace gpftk;
using ell::WeierstrassModel;

namespace {

WeierstrassModel curve_11a3() { return {0, -1, 1, 0, 0}; }      // y^2 + y = x^3 - x^2
WeierstrassModel curve_32a() { return {0, 0, 0, -1, 0}; }       // y^2 = x^3 - x
WeierstrassModel curve_36a() { return {0, 0, 0, 0, 1}; }        // y^2 = x^3 + 1

std::vector<ell::CurveFixture> load_fixtures() {
    std::ifstream in(std::string(GPFTK_FIXTURE_DIR) + "/curve_oracle.txt");
    REQUIRE(in.good());
    std::vector<ell::CurveFixture> out;
    std::string line;
    while (std::getline(in, line)) {
        auto fx = ell::parse_fixture_line(line);
        if (fx) out.push_back(std::move(*fx));
    }
    return out;
}

}  // namespace

TEST_CASE("invariants of the standard examples") {
    auto iv = ell::invariants(curve_32a());
    CHECK(iv.delta == 64);
    CHECK(iv.c4 == 48);

    iv = ell::invariants(curve_36a());
    CHECK(iv.delta == -432);
    CHECK(iv.c4 == 0);

    iv = ell::invariants(curve_11a3());
    CHECK(iv.delta == -11);
}

TEST_CASE("c4^3 - c6^2 = 1728 delta on random models") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> cd(-50, 50);
    for (int i = 0; i < 1000; ++i) {
        WeierstrassModel E{cd(rng), cd(rng), cd(rng), cd(rng), cd(rng)};
        auto iv = ell::invariants(E);
        REQUIRE(iv.c4 * iv.c4 * iv.c4 - iv.c6 * iv.c6 == 1728 * iv.delta);
    }
}

TEST_CASE("transformation roundtrip") {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> cd(-20, 20);
    std::uniform_int_distribution<int> sd(1, 3);
    for (int i = 0; i < 200; ++i) {
        WeierstrassModel E{cd(rng), cd(rng), cd(rng), cd(rng), cd(rng)};
        Int u = sd(rng);
        // build E' = unapply so that apply is exact by construction
        ell::Transformation T{u, cd(rng), cd(rng), cd(rng)};
        WeierstrassModel big = ell::unapply(E, T);
        CHECK(ell::apply(big, T) == E);
        auto ivb = ell::invariants(big);
        auto ive = ell::invariants(E);
        CHECK(ivb.c4 == ive.c4 * pow_int(u, 4));
        CHECK(ivb.c6 == ive.c6 * pow_int(u, 6));
        CHECK(ivb.delta == ive.delta * pow_int(u, 12));
    }
}

TEST_CASE("minimal_model examples") {
    auto mm = ell::minimal_model(curve_32a());
    CHECK(mm.model == curve_32a());
    CHECK(mm.trans.u == 1);

    mm = ell::minimal_model(WeierstrassModel{0, 0, 0, -16, 0});
    CHECK(mm.trans.u == 2);
    CHECK(mm.model == curve_32a());
    CHECK(ell::invariants(mm.model).delta == 64);

    mm = ell::minimal_model(curve_11a3());
    CHECK(mm.model == curve_11a3());
    CHECK(mm.trans.u == 1);

    CHECK_THROWS_AS(ell::minimal_model(WeierstrassModel{0, 0, 0, 0, 0}), domain_error);
}

TEST_CASE("minimal_model transformation law on scaled models") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> cd(-15, 15);
    std::uniform_int_distribution<int> ud(1, 3);
    int done = 0;
    while (done < 100) {
        WeierstrassModel E{cd(rng), cd(rng), cd(rng), cd(rng), cd(rng)};
        auto iv = ell::invariants(E);
        if (iv.delta == 0) continue;
        Int u = ud(rng);
        WeierstrassModel big = ell::unapply(E, {u, cd(rng), cd(rng), cd(rng)});
        auto mm = ell::minimal_model(big);
        auto ivm = ell::invariants(mm.model);
        auto ivb = ell::invariants(big);
        // invariants scale exactly by the recorded u
        CHECK(ivb.c4 == ivm.c4 * pow_int(mm.trans.u, 4));
        CHECK(ivb.c6 == ivm.c6 * pow_int(mm.trans.u, 6));
        CHECK(ivb.delta == ivm.delta * pow_int(mm.trans.u, 12));
        CHECK(ell::apply(big, mm.trans) == mm.model);
        // a minimal model is twelfth-power minimal: re-minimalizing is a no-op
        auto mm2 = ell::minimal_model(mm.model);
        CHECK(mm2.trans.u == 1);
        CHECK(mm2.model == mm.model);
        ++done;
    }
}

TEST_CASE("tate_local examples") {
    auto ld = ell::tate_local(curve_11a3(), 11);
    CHECK(ld.kind == ell::ReductionKind::multiplicative);
    CHECK(ld.f_p == 1);
    CHECK(ld.v_delta_min == 1);
    CHECK(ld.kodaira.str() == "I1");

    ld = ell::tate_local(curve_36a(), 5);
    CHECK(ld.kind == ell::ReductionKind::good);
    CHECK(ld.f_p == 0);
    CHECK(ld.v_delta_min == 0);

    ld = ell::tate_local(curve_32a(), 2);
    CHECK(ld.kind == ell::ReductionKind::additive);
    CHECK(ld.f_p == 5);
    CHECK(ld.kodaira.str() == "III");

    CHECK_THROWS_AS(ell::tate_local(curve_32a(), 4), domain_error);
    CHECK_THROWS_AS(ell::tate_local(WeierstrassModel{0, 0, 0, 0, 0}, 2), domain_error);
}

TEST_CASE("conductor examples") {
    auto g = ell::conductor(curve_11a3());
    CHECK(g.conductor == 11);
    CHECK(g.delta_min == -11);
    REQUIRE(g.locals.size() == 1);
    CHECK(g.locals[0].p == 11);

    g = ell::conductor(curve_32a());
    CHECK(g.conductor == 32);
    CHECK(g.delta_min == 64);

    g = ell::conductor(curve_36a());
    CHECK(g.conductor == 36);
    CHECK(g.delta_min == -432);
}

TEST_CASE("szpiro_ratio") {
    CHECK(ell::szpiro_ratio(curve_11a3()) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(ell::szpiro_ratio(curve_32a()) == Catch::Approx(1.2).epsilon(1e-12));
    ell::GlobalInvariants unit{1, 5, {}};
    CHECK(ell::szpiro_ratio(unit) == 0.0);  // |delta_min| = 1 guard path
    ell::GlobalInvariants bad{-7, 1, {}};
    CHECK_THROWS_AS(ell::szpiro_ratio(bad), domain_error);
}

TEST_CASE("naive_height") {
    CHECK(ell::naive_height(12, 16) == Catch::Approx(std::log(1728.0)).epsilon(1e-12));
    CHECK(ell::naive_height(0, 1) == 0.0);
    CHECK(ell::naive_height(-1, 0) == 0.0);
    CHECK_THROWS_AS(ell::naive_height(0, 0), domain_error);
}

TEST_CASE("is_semistable_outside") {
    CHECK(ell::is_semistable_outside(curve_32a(), {Int(2)}));
    CHECK_FALSE(ell::is_semistable_outside(curve_36a(), {}));
    CHECK_FALSE(ell::is_semistable_outside(curve_32a(), {}));
    CHECK(ell::is_semistable_outside(curve_11a3(), {}));
}

TEST_CASE("valuation_product_outside") {
    CHECK(ell::valuation_product_outside(curve_11a3(), {}) == 1);
    CHECK(ell::valuation_product_outside(curve_32a(), {Int(2)}) == 1);
    // minimal discriminant -432 = -2^4 3^3
    CHECK(ell::valuation_product_outside(curve_36a(), {}) == 12);
    CHECK(ell::valuation_product_outside(curve_36a(), {Int(2)}) == 3);
}

TEST_CASE("kodaira symbol printing and parsing") {
    using KS = ell::KodairaSymbol;
    for (const char* s : {"I0", "I1", "I17", "II", "III", "IV", "I0*", "I2*", "IV*", "III*", "II*"}) {
        CHECK(KS::parse(s).str() == s);
    }
    CHECK_THROWS_AS(KS::parse("V"), usage_error);
}

TEST_CASE("oracle fixture equivalence") {
    auto fixtures = load_fixtures();
    REQUIRE(fixtures.size() >= 10);
    for (const auto& fx : fixtures) {
        CAPTURE(fx.model.str());
        ell::GlobalInvariants g = ell::conductor(fx.model);
        CHECK(g.delta_min == fx.delta_min);
        CHECK(g.conductor == fx.conductor);
        REQUIRE(g.locals.size() == fx.locals.size());
        for (std::size_t i = 0; i < g.locals.size(); ++i) {
            CAPTURE(i);
            CHECK(g.locals[i].p == fx.locals[i].p);
            CHECK(g.locals[i].kodaira.str() == fx.locals[i].kodaira);
            CHECK(g.locals[i].f_p == fx.locals[i].f);
            CHECK(g.locals[i].v_delta_min == fx.locals[i].v);
        }
    }
}

TEST_CASE("local data invariants on fixtures and random curves") {
    auto check_locals = [](const WeierstrassModel& E) {
        auto g = ell::conductor(E);
        auto mm = ell::minimal_model(E);
        auto ivm = ell::invariants(mm.model);
        CHECK(g.delta_min == ivm.delta);
        Int norm = 1;
        for (const auto& ld : g.locals) {
            bool good = ld.kind == ell::ReductionKind::good;
            CHECK(good == (ld.f_p == 0));
            CHECK(good == (ld.v_delta_min == 0));
            if (ld.kind == ell::ReductionKind::multiplicative) CHECK(ld.f_p == 1);
            if (ld.kind == ell::ReductionKind::additive) CHECK(ld.f_p >= 2);
            if (ld.p >= 5) CHECK(ld.f_p <= 2);
            if (ld.p == 3) CHECK(ld.f_p <= 5);
            if (ld.p == 2) CHECK(ld.f_p <= 8);
            CHECK(ld.v_delta_min ==
                  static_cast<int>(valuation_unchecked(ld.p, ivm.delta)));
            norm *= pow_int(ld.p, static_cast<unsigned>(ld.f_p));
        }
        CHECK(norm == g.conductor);
        CHECK(arith::radical(g.conductor) == arith::radical(g.delta_min));
    };

    for (const auto& fx : load_fixtures()) check_locals(fx.model);

    std::mt19937_64 rng(44);
    std::uniform_int_distribution<int> cd(-30, 30);
    int done = 0;
    while (done < 60) {
        WeierstrassModel E{cd(rng), cd(rng), cd(rng), cd(rng), cd(rng)};
        if (ell::invariants(E).delta == 0) continue;
        check_locals(E);
        ++done;
    }
}
