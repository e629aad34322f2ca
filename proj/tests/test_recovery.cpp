#include <doctest.h>

#include <limits>

#include "graphsr/filter.hpp"
#include "graphsr/recovery.hpp"
#include "oracles.hpp"

using namespace gsr;

namespace {

GraphFilter cycle_filter(std::size_t n) {
    const Graph g = oracle::cycle(n);
    return build_filter(laplacian(g, false), std::vector<double>{1.0, 1.0}, geodesic_table(g));
}

GicConfig config(std::size_t s, double sigma = 1.0, std::optional<double> zeta = std::nullopt) {
    GicConfig cfg;
    cfg.sparsity = s;
    cfg.sigma_n = sigma;
    cfg.screening_zeta = zeta;
    return cfg;
}

// argmax GIC by brute force with SVD projections; ties to smaller, then lexicographic.
std::pair<SupportSet, double> brute_force_gic(const Eigen::MatrixXd& h, const Eigen::VectorXd& y,
                                              const SupportSet& pool, const GicConfig& cfg) {
    SupportSet best;
    double best_value = 0.0;
    for (const auto& omega : oracle::all_subsets(pool, cfg.sparsity)) {
        const double v = oracle::projection_energy(h, omega, y) / cfg.noise_variance() - cfg.penalty(omega.size());
        if (v > best_value + 1e-9 || (std::abs(v - best_value) <= 1e-9 && omega.size() < best.size())) {
            best = omega;
            best_value = v;
        }
    }
    return {best, best_value};
}

struct Trial {
    Graph g;
    GeodesicTable dist;
    std::shared_ptr<const GraphFilter> f;
    Instance inst;
};

Trial small_trial(std::mt19937_64& rng, std::size_t n_max, std::size_t s, double snr_db) {
    const std::size_t n = 6 + rng() % (n_max - 5);
    Trial t;
    t.g = oracle::random_graph(n, 0.18, rng, true);
    t.dist = geodesic_table(t.g);
    const int psi = 1 + static_cast<int>(rng() % 2);
    t.f = std::make_shared<const GraphFilter>(
        build_filter(normalize_gso_to_max_eig(laplacian(t.g, false), 12.0), geometric_coefficients(psi, 1.0), t.dist));
    const SupportSet support = draw_support(t.g, SupportScenario::Localized, s, rng());
    SimulationParams sim;
    sim.snr_db = snr_db;
    t.inst = simulate_instance(t.f, support, sim, rng());
    return t;
}

}  // namespace

TEST_CASE("exhaustive GIC") {
    const GraphFilter f = cycle_filter(6);
    SUBCASE("single source") {
        GicEvaluator ev(f.h, f.h.col(0), config(1));
        const RecoveryResult r = exhaustive_gic(ev);
        CHECK(r.support == SupportSet{0});
        CHECK(r.gic_value == doctest::Approx(9.0));
        CHECK(r.evaluations == 6);
        CHECK(r.method == "exhaustive");
        REQUIRE(r.x_hat.size() == 1);
        CHECK(r.x_hat(0) == doctest::Approx(1.0));
        CHECK(r.dense_signal(6)(0) == doctest::Approx(1.0));
    }
    SUBCASE("zero measurement") {
        GicEvaluator ev(f.h, Eigen::VectorXd::Zero(6), config(2));
        const RecoveryResult r = exhaustive_gic(ev);
        CHECK(r.support.empty());
        CHECK(r.gic_value == 0.0);
    }
    SUBCASE("two orthogonal sources") {
        GicEvaluator ev(f.h, f.h.col(0) + f.h.col(3), config(2));
        CHECK(exhaustive_gic(ev).support == SupportSet{0, 3});
    }
    SUBCASE("restricted candidates") {
        GicEvaluator ev(f.h, f.h.col(0), config(1));
        CHECK(exhaustive_gic(ev, {1, 2, 3}).support == SupportSet{1});
        CHECK(exhaustive_gic(ev, {2, 3, 4}).support.empty());
    }
    CHECK(enumeration_size(6, 2) == 21);
    CHECK(enumeration_size(140, 4) == 140 + 9730 + 447580 + 15329615);
    CHECK(enumeration_size(4, 9) == 15);
}

TEST_CASE("exhaustive GIC matches brute-force oracle") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t s = 1 + rng() % 3;
        Trial t = small_trial(rng, 12, s, 10.0 + static_cast<double>(rng() % 20));
        const GicConfig cfg = config(s, 0.01);
        GicEvaluator ev(t.f->h, t.inst.y, cfg);
        const RecoveryResult r = exhaustive_gic(ev);
        const auto [best, value] = brute_force_gic(t.f->h, t.inst.y, oracle::all_nodes(t.g.node_count()), cfg);
        CHECK(r.gic_value == doctest::Approx(value).epsilon(1e-9));
        CHECK(r.support == best);
    }
}

TEST_CASE("partition_candidates") {
    const Graph c12 = oracle::cycle(12);
    const GeodesicTable d = geodesic_table(c12);
    const auto parts = partition_candidates(d, {0, 1, 6, 7}, 1);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0] == SupportSet{0, 1});
    CHECK(parts[1] == SupportSet{6, 7});
    CHECK(partition_candidates(d, {5}, 1) == std::vector<SupportSet>{{5}});
    CHECK(partition_candidates(d, {0, 2}, 1).size() == 1);
    CHECK(partition_candidates(d, {0, 3}, 1).size() == 2);
    CHECK(partition_candidates(d, {}, 1).empty());

    SUBCASE("components are separated and cover the input") {
        std::mt19937_64 rng(67);
        for (int trial = 0; trial < 100; ++trial) {
            const Graph g = oracle::random_graph(30, 0.06, rng, false);
            const GeodesicTable dist = geodesic_table(g);
            const int psi = 1 + static_cast<int>(rng() % 2);
            std::vector<NodeId> picks;
            for (NodeId k = 0; k < 30; ++k)
                if (rng() % 3 == 0) picks.push_back(k);
            const SupportSet dhat(picks);
            const auto comps = partition_candidates(dist, dhat, psi);
            SupportSet cover;
            for (std::size_t a = 0; a < comps.size(); ++a) {
                cover = cover.unite(comps[a]);
                for (std::size_t b = a + 1; b < comps.size(); ++b) {
                    CHECK(comps[a][0] < comps[b][0]);
                    for (NodeId u : comps[a])
                        for (NodeId v : comps[b]) CHECK(dist.at(u, v) > 2 * psi);
                }
            }
            CHECK(cover == dhat);
        }
    }
}

TEST_CASE("GM-GIC") {
    SUBCASE("two sources on C12") {
        const GraphFilter f = cycle_filter(12);
        const GeodesicTable d = geodesic_table(oracle::cycle(12));
        GicEvaluator ev(f.h, f.h.col(0) + f.h.col(3), config(2, 1.0, 1e-6));
        GmGicTrace trace;
        GmGicOptions opts;
        opts.psi = 1;
        const RecoveryResult r = gm_gic(ev, d, opts, &trace);
        CHECK(r.support == SupportSet{0, 3});
        CHECK(r.method == "gm-gic");
        CHECK(trace.screened == SupportSet{0, 1, 2, 3, 4, 5, 10, 11});
        CHECK(trace.partition.size() == 1);
    }
    SUBCASE("C6 fixture") {
        const GraphFilter f = cycle_filter(6);
        GicEvaluator ev(f.h, f.h.col(0), config(1, 0.01));
        const RecoveryResult r = gm_gic(ev, geodesic_table(oracle::cycle(6)), {});
        CHECK(r.support == SupportSet{0});
    }
    SUBCASE("empty screening") {
        const GraphFilter f = cycle_filter(6);
        GicEvaluator ev(f.h, f.h.col(0), config(2, 1.0, std::numeric_limits<double>::infinity()));
        const RecoveryResult r = gm_gic(ev, geodesic_table(oracle::cycle(6)), {});
        CHECK(r.support.empty());
        CHECK(r.gic_value == 0.0);
    }
    SUBCASE("zero threshold on a connected auxiliary graph equals exhaustive") {
        std::mt19937_64 rng(71);
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t s = 1 + rng() % 3;
            Trial t = small_trial(rng, 12, s, 15.0);
            const GicConfig cfg = config(s, 0.01, 0.0);
            GicEvaluator a(t.f->h, t.inst.y, cfg);
            GicEvaluator b(t.f->h, t.inst.y, cfg);
            GmGicOptions opts;
            opts.psi = t.f->psi;
            GmGicTrace trace;
            const RecoveryResult gm = gm_gic(a, t.dist, opts, &trace);
            const RecoveryResult ex = exhaustive_gic(b);
            if (trace.partition.size() == 1) {
                CHECK(gm.gic_value == doctest::Approx(ex.gic_value).epsilon(1e-9));
            }
            CHECK(gm.gic_value <= ex.gic_value + 1e-9);
            CHECK(gm.evaluations <= ex.evaluations);
        }
    }
    SUBCASE("worker count does not change the result") {
        std::mt19937_64 rng(73);
        for (int trial = 0; trial < 10; ++trial) {
            Trial t = small_trial(rng, 14, 3, 20.0);
            GicEvaluator a(t.f->h, t.inst.y, config(3, 0.01));
            GicEvaluator b(t.f->h, t.inst.y, config(3, 0.01));
            GmGicOptions one, four;
            one.psi = four.psi = t.f->psi;
            four.jobs = 4;
            const RecoveryResult ra = gm_gic(a, t.dist, one);
            const RecoveryResult rb = gm_gic(b, t.dist, four);
            CHECK(ra.support == rb.support);
            CHECK(ra.gic_value == rb.gic_value);
            CHECK(ra.evaluations == rb.evaluations);
        }
    }
}

TEST_CASE("graph branch and bound") {
    const GraphFilter f = cycle_filter(6);
    SUBCASE("root bounds and termination on C6") {
        GicEvaluator ev(f.h, f.h.col(0), config(1));
        GraphBnb search(ev, node_ordering(ev));
        CHECK(search.lower() == 0.0);
        CHECK(search.upper() == doctest::Approx(9.0));
        const RecoveryResult r = search.run();
        CHECK(r.support == SupportSet{0});
        CHECK(r.gic_value == doctest::Approx(9.0));
        CHECK(search.lower() == doctest::Approx(9.0));
        CHECK(search.upper() == doctest::Approx(9.0));
        CHECK(r.converged);
        CHECK(r.method == "g-bnb");
    }
    SUBCASE("zero measurement") {
        GicEvaluator ev(f.h, Eigen::VectorXd::Zero(6), config(2));
        GraphBnb search(ev, node_ordering(ev));
        CHECK(search.upper() == 0.0);
        CHECK(search.terminated());
        CHECK_FALSE(search.step());
        CHECK(search.run().support.empty());
    }
    SUBCASE("invariants along the search") {
        std::mt19937_64 rng(79);
        for (int trial = 0; trial < 60; ++trial) {
            const std::size_t s = 1 + rng() % 3;
            Trial t = small_trial(rng, 12, s, 20.0);
            GicEvaluator ev(t.f->h, t.inst.y, config(s, 0.01));
            GicEvaluator check(t.f->h, t.inst.y, config(s, 0.01));
            GraphBnb search(ev, node_ordering(ev));
            do {
                CHECK(search.lower() == doctest::Approx(check.gic(search.incumbent())).epsilon(1e-12));
                for (const BnbNode& leaf : search.leaves()) {
                    CHECK(leaf.upper >= search.lower());
                    CHECK(leaf.s1.size() <= s);
                    if (leaf.s1.size() == s) CHECK(leaf.upper == leaf.lower);
                }
            } while (search.step());
            GicEvaluator ex_ev(t.f->h, t.inst.y, config(s, 0.01));
            const RecoveryResult ex = exhaustive_gic(ex_ev);
            CHECK(check.gic(search.incumbent()) <= ex.gic_value + 1e-9);
        }
    }
    SUBCASE("iteration cap") {
        GicEvaluator ev(f.h, f.h.col(0) + 0.5 * f.h.col(2), config(2));
        BnbOptions opts;
        opts.max_iterations = 1;
        const RecoveryResult r = graph_bnb_gic(ev, opts);
        CHECK_FALSE(r.converged);
    }
    CHECK_THROWS_AS(
        [&] {
            GicEvaluator ev(f.h, f.h.col(0), config(1));
            GraphBnb bad(ev, {0, 1, 2});
        }(),
        std::invalid_argument);
}

TEST_CASE("GFOC") {
    const GraphFilter f = cycle_filter(6);
    const Graph c6 = oracle::cycle(6);
    SUBCASE("moves to the better neighbor") {
        GicEvaluator ev(f.h, f.h.col(0), config(1));
        const RecoveryResult r = gfoc(ev, c6, {1});
        CHECK(r.support == SupportSet{0});
        CHECK(r.gic_value == doctest::Approx(9.0));
        CHECK(r.method == "gfoc");
    }
    SUBCASE("local maximum is kept") {
        GicEvaluator ev(f.h, f.h.col(0) + f.h.col(3), config(2));
        CHECK(gfoc(ev, c6, {0, 3}).support == SupportSet{0, 3});
    }
    SUBCASE("two elements collapse onto one neighbor") {
        const Graph p3 = oracle::path(3);
        const GraphFilter fp = build_filter(laplacian(p3, false), std::vector<double>{1.0, 1.0}, geodesic_table(p3));
        GicEvaluator ev(fp.h, fp.h.col(1), config(2));
        const RecoveryResult r = gfoc(ev, p3, {0, 2});
        CHECK(r.support == SupportSet{1});
    }
    SUBCASE("oversized input is cut to the budget") {
        GicEvaluator ev(f.h, f.h.col(0) + f.h.col(3), config(2));
        const RecoveryResult r = gfoc(ev, c6, {0, 1, 3});
        CHECK(r.support.size() <= 2);
        CHECK(r.support == SupportSet{0, 3});
    }
    SUBCASE("radius two reaches second neighbors") {
        GicEvaluator ev(f.h, f.h.col(0), config(1));
        GfocOptions opts;
        opts.radius = 2;
        CHECK(gfoc(ev, c6, {2}, opts).support == SupportSet{0});
        CHECK(gfoc(ev, c6, {2}).support == SupportSet{1});
    }
    SUBCASE("never lowers GIC") {
        std::mt19937_64 rng(83);
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t s = 1 + rng() % 4;
            Trial t = small_trial(rng, 20, std::min<std::size_t>(s, 3), 15.0);
            GicEvaluator ev(t.f->h, t.inst.y, config(s, 0.01));
            std::vector<NodeId> picks;
            while (picks.size() < s) picks.push_back(static_cast<NodeId>(rng() % t.g.node_count()));
            const SupportSet in(picks);
            const double before = ev.gic(in);
            CHECK(gfoc(ev, t.g, in).gic_value >= before - 1e-9);
        }
    }
}

TEST_CASE("OMP") {
    const GraphFilter f = cycle_filter(6);
    GicEvaluator ev(f.h, f.h.col(0), config(3));
    CHECK(omp(ev).support == SupportSet{0});
    GicEvaluator zero(f.h, Eigen::VectorXd::Zero(6), config(3));
    CHECK(omp(zero).support.empty());
    GicEvaluator two(f.h, f.h.col(0) + f.h.col(3), config(2));
    const RecoveryResult r = omp(two);
    CHECK(r.support == SupportSet{0, 3});
    CHECK(r.method == "omp");

    OmpOptions cap;
    cap.max_cardinality = 1;
    CHECK(omp(two, cap).support.size() == 1);

    SUBCASE("orthogonal active columns are recovered exactly") {
        std::mt19937_64 rng(89);
        const GraphFilter big = cycle_filter(30);
        for (int trial = 0; trial < 50; ++trial) {
            const auto a = static_cast<NodeId>(rng() % 30);
            const auto b = static_cast<NodeId>((a + 5 + rng() % 10) % 30);
            const auto c = static_cast<NodeId>((b + 5 + rng() % 5) % 30);
            const SupportSet truth{a, b, c};
            if (truth.size() != 3) continue;
            const GeodesicTable d = geodesic_table(oracle::cycle(30));
            if (d.at(a, b) <= 2 || d.at(b, c) <= 2 || d.at(a, c) <= 2) continue;
            const auto sign = [&] { return rng() % 2 ? 1.0 : -1.0; };
            Eigen::VectorXd y = sign() * big.h.col(a) + sign() * big.h.col(b) + sign() * big.h.col(c);
            GicEvaluator e(big.h, y, config(3, 0.01));
            CHECK(omp(e).support == truth);
        }
    }
}

TEST_CASE("Lasso") {
    SUBCASE("soft-threshold closed form") {
        const Eigen::MatrixXd h = Eigen::MatrixXd::Identity(1, 1);
        LassoOptions opts;
        opts.lambda = 0.3;
        for (double c : {2.0, -2.0, 0.1, -0.25, 0.3}) {
            const Eigen::VectorXd y = Eigen::VectorXd::Constant(1, c);
            const LassoSolution sol = lasso_solve(h, y, opts);
            const double expect = std::copysign(std::max(std::abs(c) - 0.3, 0.0), c);
            CHECK(sol.x(0) == doctest::Approx(expect));
        }
    }
    SUBCASE("huge lambda gives the empty support") {
        const GraphFilter f = cycle_filter(6);
        GicEvaluator ev(f.h, f.h.col(0), config(2));
        LassoOptions opts;
        opts.lambda = 1e9;
        const RecoveryResult r = lasso(ev, opts);
        CHECK(r.support.empty());
        CHECK(r.method == "lasso");
    }
    SUBCASE("lambda must be positive") {
        LassoOptions opts;
        opts.lambda = 0.0;
        CHECK_THROWS_AS(lasso_solve(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Ones(2), opts),
                        std::invalid_argument);
    }
    SUBCASE("stationarity at convergence") {
        std::mt19937_64 rng(97);
        for (int trial = 0; trial < 20; ++trial) {
            Eigen::MatrixXd h = Eigen::MatrixXd::Random(15, 10);
            Eigen::VectorXd y = Eigen::VectorXd::Random(15);
            LassoOptions opts;
            opts.lambda = 0.2;
            opts.tolerance = 1e-12;
            const LassoSolution sol = lasso_solve(h, y, opts);
            REQUIRE(sol.converged);
            const Eigen::VectorXd grad = h.transpose() * (y - h * sol.x);
            for (Eigen::Index j = 0; j < 10; ++j) {
                if (sol.x(j) != 0.0) {
                    CHECK(grad(j) == doctest::Approx(0.2 * (sol.x(j) > 0 ? 1.0 : -1.0)).epsilon(1e-6));
                } else {
                    CHECK(std::abs(grad(j)) <= 0.2 + 1e-6);
                }
            }
        }
    }
    SUBCASE("support is the largest nonzeros, refit by least squares") {
        const GraphFilter f = cycle_filter(12);
        GicEvaluator ev(f.h, 2.0 * f.h.col(0) + 1.0 * f.h.col(6), config(2));
        const RecoveryResult r = lasso(ev, {});
        CHECK(r.support == SupportSet{0, 6});
        CHECK(r.x_hat(0) == doctest::Approx(2.0));
        CHECK(r.x_hat(1) == doctest::Approx(1.0));
    }
}
