#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>

#include "graphsr/filter.hpp"
#include "graphsr/gic.hpp"
#include "oracles.hpp"

using namespace gsr;

namespace {

struct C6 {
    Graph g = oracle::cycle(6);
    GraphFilter f = build_filter(laplacian(g, false), std::vector<double>{1.0, 1.0}, geodesic_table(g));
};

GicConfig unit_config(std::size_t s = 1) {
    GicConfig cfg;
    cfg.sparsity = s;
    return cfg;
}

struct RandomCase {
    Graph g;
    GraphFilter f;
    Eigen::VectorXd y;
};

RandomCase random_case(std::mt19937_64& rng, std::size_t n_min, std::size_t n_span, int psi_max) {
    const std::size_t n = n_min + rng() % n_span;
    Graph g = oracle::random_graph(n, 0.2, rng, true);
    const int psi = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(psi_max));
    GraphFilter f = build_filter(normalize_gso_to_max_eig(laplacian(g, false), 2.0), geometric_coefficients(psi, 1.0),
                                 geodesic_table(g));
    std::normal_distribution<double> nd;
    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    for (auto& v : y) v = nd(rng);
    return {std::move(g), std::move(f), std::move(y)};
}

}  // namespace

TEST_CASE("projected energy and GIC on C6 with y = H_0") {
    C6 c;
    GicEvaluator ev(c.f.h, c.f.h.col(0), unit_config());
    CHECK(ev.projected_energy({0}) == doctest::Approx(11.0));
    CHECK(ev.projected_energy({}) == 0.0);
    CHECK(std::abs(ev.projected_energy({3})) < 1e-24);
    CHECK(ev.gic({0}) == doctest::Approx(9.0));
    CHECK(ev.gic({}) == 0.0);
    CHECK(ev.gic({1}) == doctest::Approx(36.0 / 11.0 - 2.0));

    const std::vector<double> expect{11.0, 36.0 / 11.0, 1.0 / 11.0, 0.0, 1.0 / 11.0, 36.0 / 11.0};
    const auto& singles = ev.single_energies();
    for (std::size_t m = 0; m < 6; ++m) CHECK(singles[m] == doctest::Approx(expect[m]));

    const auto order = node_ordering(ev);
    CHECK(order.front() == 0);
    CHECK(order.back() == 3);
}

TEST_CASE("energies are measured in noise-variance units") {
    C6 c;
    GicConfig cfg = unit_config();
    cfg.sigma_n = 0.5;
    GicEvaluator ev(c.f.h, c.f.h.col(0), cfg);
    CHECK(ev.projected_energy({0}) == doctest::Approx(11.0));
    CHECK(ev.gic({0}) == doctest::Approx(11.0 / 0.25 - 2.0));
}

TEST_CASE("ls_recover") {
    C6 c;
    GicEvaluator ev(c.f.h, 3.5 * c.f.h.col(0), unit_config());
    const Eigen::VectorXd x = ev.ls_recover({0});
    REQUIRE(x.size() == 1);
    CHECK(x(0) == doctest::Approx(3.5));

    GicEvaluator ev2(c.f.h, c.f.h.col(0), unit_config(2));
    const Eigen::VectorXd x2 = ev2.ls_recover({0, 3});
    CHECK(x2(0) == doctest::Approx(1.0));
    CHECK(std::abs(x2(1)) < 1e-12);

    Eigen::MatrixXd dup = c.f.h;
    dup.col(4) = dup.col(1);
    GicEvaluator ev3(dup, c.f.h.col(0), unit_config(2));
    CHECK_THROWS_AS(ev3.ls_recover({1, 4}), RankError);
    CHECK_THROWS_AS(ev3.projected_energy({1, 4}), RankError);
    CHECK(ev3.evaluations() == 0);
}

TEST_CASE("projection matches SVD oracle on random supports") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        auto rc = random_case(rng, 6, 20, 3);
        const std::size_t n = rc.g.node_count();
        GicEvaluator ev(rc.f.h, rc.y, unit_config(4));
        std::vector<NodeId> nodes;
        const std::size_t card = 1 + rng() % 4;
        while (nodes.size() < card) {
            const auto k = static_cast<NodeId>(rng() % n);
            if (std::find(nodes.begin(), nodes.end(), k) == nodes.end()) nodes.push_back(k);
        }
        const SupportSet omega(nodes);
        const double e = ev.projected_energy(omega);
        CHECK(e == doctest::Approx(oracle::projection_energy(rc.f.h, omega, rc.y)).epsilon(1e-9));

        const Eigen::VectorXd x = ev.ls_recover(omega);
        const Eigen::VectorXd xref = oracle::least_squares(rc.f.h, omega, rc.y);
        CHECK((x - xref).norm() <= 1e-7 * std::max(1.0, xref.norm()));

        const Eigen::MatrixXd a = oracle::columns(rc.f.h, omega);
        const Eigen::VectorXd r = rc.y - a * x;
        CHECK((a.transpose() * r).norm() <= 1e-8 * std::max(1.0, a.norm() * rc.y.norm()));
        CHECK(e <= rc.y.squaredNorm() * (1 + 1e-12));
    }
}

TEST_CASE("projection properties") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 100; ++trial) {
        auto rc = random_case(rng, 8, 16, 2);
        const std::size_t n = rc.g.node_count();
        GicEvaluator ev(rc.f.h, rc.y, unit_config(5));

        // Monotone along a nested chain.
        SupportSet chain;
        double prev = 0.0;
        for (int step = 0; step < 5; ++step) {
            chain.insert(static_cast<NodeId>(rng() % n));
            const double e = ev.projected_energy(chain);
            CHECK(prev <= e + 1e-9);
            prev = e;
        }

        // Idempotence: projecting P y again leaves it fixed.
        const SupportSet omega = chain;
        const Eigen::MatrixXd a = oracle::columns(rc.f.h, omega);
        const Eigen::VectorXd py = a * ev.ls_recover(omega);
        GicEvaluator ev2(rc.f.h, py, unit_config(5));
        const Eigen::VectorXd ppy = a * ev2.ls_recover(omega);
        CHECK((ppy - py).norm() <= 1e-10 * std::max(1.0, py.norm()));
    }
}

TEST_CASE("partition decomposition for separated subsets") {
    std::mt19937_64 rng(47);
    int checked = 0;
    for (int trial = 0; trial < 300 && checked < 100; ++trial) {
        auto rc = random_case(rng, 15, 20, 2);
        const GeodesicTable d = geodesic_table(rc.g);
        const int psi = rc.f.psi;
        const std::size_t n = rc.g.node_count();
        const auto a = static_cast<NodeId>(rng() % n);
        std::vector<NodeId> far;
        for (std::size_t m = 0; m < n; ++m)
            if (d.at(a, static_cast<NodeId>(m)) > 2 * psi) far.push_back(static_cast<NodeId>(m));
        if (far.empty()) continue;
        const NodeId b = far[rng() % far.size()];
        SupportSet da{a}, db{b};
        for (const auto& nb : rc.g.neighbors(a))
            if (d.at(nb.node, b) > 2 * psi) da.insert(nb.node);
        GicEvaluator ev(rc.f.h, rc.y, unit_config(8));
        const double joint = ev.projected_energy(da.unite(db));
        const double sum = ev.projected_energy(da) + ev.projected_energy(db);
        CHECK(std::abs(joint - sum) <= 1e-8 * rc.y.squaredNorm());
        ++checked;
    }
    CHECK(checked >= 50);
}

TEST_CASE("subset enumeration agrees with direct evaluation") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 40; ++trial) {
        auto rc = random_case(rng, 5, 6, 2);
        const std::size_t n = rc.g.node_count();
        const std::size_t s = 1 + rng() % 3;
        GicEvaluator walker(rc.f.h, rc.y, unit_config(s), false);
        GicEvaluator direct(rc.f.h, rc.y, unit_config(s), false);

        std::vector<SupportSet> seen;
        walker.for_each_subset(oracle::all_nodes(n), s, [&](std::span<const NodeId> nodes, double energy) {
            const SupportSet omega(std::vector<NodeId>(nodes.begin(), nodes.end()));
            seen.push_back(omega);
            CHECK(energy == direct.projected_energy(omega));
            CHECK(energy == doctest::Approx(oracle::projection_energy(rc.f.h, omega, rc.y)).epsilon(1e-9));
        });
        const auto expect = oracle::all_subsets(oracle::all_nodes(n), s);
        CHECK(seen == expect);
        CHECK(walker.evaluations() == expect.size());
    }
}

TEST_CASE("enumeration skips rank-deficient branches") {
    C6 c;
    Eigen::MatrixXd h = c.f.h;
    h.col(5) = h.col(2);
    GicEvaluator ev(h, c.f.h.col(0), unit_config(2));
    std::size_t visited = 0;
    ev.for_each_subset({0, 2, 5}, 2, [&](std::span<const NodeId> nodes, double) {
        CHECK_FALSE((nodes.size() == 2 && nodes[0] == 2 && nodes[1] == 5));
        ++visited;
    });
    CHECK(visited == 5);
    CHECK(ev.rank_skips() == 1);
}

TEST_CASE("evaluation counter with cache") {
    std::mt19937_64 rng(59);
    auto rc = random_case(rng, 10, 1, 1);
    GicEvaluator ev(rc.f.h, rc.y, unit_config(3));
    const std::vector<SupportSet> queries{{1}, {1, 2}, {1}, {3, 4, 5}, {1, 2}, {}, {7}, {3, 4, 5}};
    for (const auto& q : queries) ev.projected_energy(q);
    CHECK(ev.evaluations() == 4);

    GicEvaluator uncached(rc.f.h, rc.y, unit_config(3), false);
    for (const auto& q : queries) uncached.projected_energy(q);
    CHECK(uncached.evaluations() == 7);

    GicEvaluator child = ev.fork();
    CHECK(child.evaluations() == 0);
    child.projected_energy({1, 2});
    child.projected_energy({8, 9});
    CHECK(child.evaluations() == 1);
    ev.absorb(child);
    CHECK(ev.evaluations() == 5);
    ev.projected_energy({8, 9});
    CHECK(ev.evaluations() == 5);
}

TEST_CASE("GLRT screening") {
    C6 c;
    GicConfig cfg = unit_config();
    cfg.screening_zeta = 1e-6;
    GicEvaluator ev(c.f.h, c.f.h.col(0), cfg);
    CHECK(glrt_screen(ev) == SupportSet{0, 1, 2, 4, 5});

    cfg.screening_zeta = std::numeric_limits<double>::infinity();
    GicEvaluator inf_ev(c.f.h, c.f.h.col(0), cfg);
    CHECK(glrt_screen(inf_ev).empty());

    Eigen::VectorXd noisy = c.f.h.col(0);
    noisy += Eigen::VectorXd::LinSpaced(6, 0.01, 0.07);
    cfg.screening_zeta = 0.0;
    GicEvaluator zero_ev(c.f.h, noisy, cfg);
    CHECK(glrt_screen(zero_ev) == oracle::all_nodes(6));

    CHECK(GicConfig{}.zeta() == 1.0);
}

TEST_CASE("node ordering ties go to the smaller id") {
    const Eigen::MatrixXd h = Eigen::MatrixXd::Identity(5, 5);
    GicEvaluator ev(h, Eigen::VectorXd::Ones(5), unit_config());
    CHECK(node_ordering(ev) == std::vector<NodeId>{0, 1, 2, 3, 4});
}

TEST_CASE("config validation") {
    C6 c;
    GicConfig cfg;
    cfg.sparsity = 0;
    CHECK_THROWS_AS(GicEvaluator(c.f.h, c.f.h.col(0), cfg), std::invalid_argument);
    cfg = GicConfig{};
    cfg.sigma_n = 0.0;
    CHECK_THROWS_AS(GicEvaluator(c.f.h, c.f.h.col(0), cfg), std::invalid_argument);
    cfg = GicConfig{};
    cfg.penalty = Penalty{"offset", [](std::size_t c) { return 1.0 + static_cast<double>(c); }};
    CHECK_THROWS_AS(GicEvaluator(c.f.h, c.f.h.col(0), cfg), std::invalid_argument);
    cfg = GicConfig{};
    CHECK_THROWS_AS(GicEvaluator(c.f.h, Eigen::VectorXd::Zero(5), cfg), std::invalid_argument);
    CHECK(Penalty::linear(3.0)(2) == 6.0);
    CHECK(Penalty::aic()(4) == 8.0);

    GicEvaluator ev(c.f.h, c.f.h.col(0), GicConfig{});
    CHECK_THROWS_AS(ev.projected_energy({6}), std::out_of_range);
}
