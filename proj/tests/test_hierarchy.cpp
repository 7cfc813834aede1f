#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "qsync/errors.hpp"
#include "qsync/heom.hpp"

using namespace qsync;

TEST_CASE("index counts follow the stars-and-bars formula") {
    CHECK(enumerate_indices(6, 0).size() == 1);
    CHECK(enumerate_indices(6, 2).size() == 28);
    CHECK(enumerate_indices(6, 6).size() == 924);
    CHECK(enumerate_indices(1, 5).size() == 6);
    CHECK(enumerate_indices(2, 3).size() == 10);
    CHECK(enumerate_indices(8, 8).size() == 12870);
}

TEST_CASE("enumeration is lexicographic with the zero index first") {
    const HierarchySpace s = enumerate_indices(2, 2);
    REQUIRE(s.size() == 6);
    const std::uint8_t expect[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {2, 0}};
    for (std::size_t r = 0; r < 6; ++r) {
        CHECK(s.index(r)[0] == expect[r][0]);
        CHECK(s.index(r)[1] == expect[r][1]);
        CHECK(s.tier(r) == expect[r][0] + expect[r][1]);
    }
}

TEST_CASE("raise and lower tables are mutually inverse") {
    const HierarchySpace s = enumerate_indices(4, 3);
    for (std::size_t r = 0; r < s.size(); ++r) {
        for (int m = 0; m < s.modes(); ++m) {
            const std::int64_t up = s.raised(r, m);
            if (s.tier(r) == s.tier_cap()) {
                CHECK(up == -1);
            } else {
                REQUIRE(up >= 0);
                const std::size_t u = static_cast<std::size_t>(up);
                CHECK(s.tier(u) == s.tier(r) + 1);
                for (int q = 0; q < s.modes(); ++q)
                    CHECK(s.index(u)[q] == s.index(r)[q] + (q == m ? 1 : 0));
                CHECK(s.lowered(u, m) == static_cast<std::int64_t>(r));
            }

            const std::int64_t down = s.lowered(r, m);
            if (s.index(r)[m] == 0) {
                CHECK(down == -1);
            } else {
                REQUIRE(down >= 0);
                const std::size_t d = static_cast<std::size_t>(down);
                CHECK(s.tier(d) == s.tier(r) - 1);
                CHECK(s.raised(d, m) == static_cast<std::int64_t>(r));
            }
        }
    }
}

TEST_CASE("degenerate parameters are rejected") {
    CHECK_THROWS_AS(enumerate_indices(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_indices(-2, 3), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_indices(4, -1), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_indices(4, 300), std::invalid_argument);
}

TEST_CASE("hierarchy state starts factorized") {
    const HierarchySpace s = enumerate_indices(4, 2);
    const SystemModel model = build_model(1.0, 0.01, -1.0);
    const BathSpec bath = make_bath(0.05, 2.0, 0.3, 1);
    const Mat9 rho0 = make_initial(InitialPreset::EquatorialProduct, model, bath);

    const HierarchyState st = make_hierarchy_state(rho0, s);
    REQUIRE(st.ados.size() == s.size());
    CHECK((st.ados[0] - rho0).cwiseAbs().maxCoeff() == 0.0);
    for (std::size_t r = 1; r < st.ados.size(); ++r)
        CHECK(st.ados[r].cwiseAbs().maxCoeff() == 0.0);

    Mat9 bad = rho0;
    bad(0, 0) += 0.5;  // trace off
    CHECK_THROWS_AS(make_hierarchy_state(bad, s), InvalidInitialState);
}

TEST_CASE("rhs rejects a state that does not match the index space") {
    const HierarchySpace s = enumerate_indices(4, 2);
    const SystemModel model = build_model(1.0, 0.01, -1.0);
    const BathSpec bath = make_bath(0.05, 2.0, 0.3, 1);

    HierarchyState st;
    st.ados.assign(s.size() - 1, Mat9::Zero());
    CHECK_THROWS_AS(heom_rhs(st, model, bath, s), std::invalid_argument);

    // mode count must be 1 or 2 full expansions wide
    const HierarchySpace wrong = enumerate_indices(3, 2);
    HierarchyState st3;
    st3.ados.assign(wrong.size(), Mat9::Zero());
    CHECK_THROWS_AS(heom_rhs(st3, model, bath, wrong), std::invalid_argument);
}
