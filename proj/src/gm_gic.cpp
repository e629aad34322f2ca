#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>

#include "graphsr/recovery.hpp"

namespace gsr {

namespace {

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

std::vector<SupportSet> partition_candidates(const GeodesicTable& dist, const SupportSet& d_hat, int psi) {
    const auto& nodes = d_hat.nodes();
    DisjointSets sets(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            const int d = dist.at(nodes[i], nodes[j]);
            if (d >= 1 && d <= 2 * psi) sets.unite(i, j);
        }
    }
    // Roots are the smallest member index, so components come out ordered by
    // their smallest node.
    std::vector<SupportSet> parts;
    std::vector<std::size_t> slot(nodes.size(), nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::size_t root = sets.find(i);
        if (slot[root] == nodes.size()) {
            slot[root] = parts.size();
            parts.emplace_back();
        }
        parts[slot[root]].insert(nodes[i]);
    }
    return parts;
}

RecoveryResult gm_gic(GicEvaluator& ev, const GeodesicTable& dist, const GmGicOptions& opts, GmGicTrace* trace) {
    // Step 1: pre-screening.
    const SupportSet screened = glrt_screen(ev);
    if (trace) trace->screened = screened;
    if (screened.empty()) return finalize_result(ev, {}, "gm-gic");

    // Step 2: partition into subsets more than 2 psi hops apart.
    const auto parts = partition_candidates(dist, screened, opts.psi);
    if (trace) trace->partition = parts;

    // Step 3: local exhaustive GIC per subset.
    std::vector<SupportSet> partial(parts.size());
    const std::size_t workers = std::min(std::max<std::size_t>(opts.jobs, 1), parts.size());
    if (workers <= 1) {
        for (std::size_t q = 0; q < parts.size(); ++q) partial[q] = exhaustive_gic(ev, parts[q]).support;
    } else {
        std::vector<GicEvaluator> forks;
        forks.reserve(parts.size());
        for (std::size_t q = 0; q < parts.size(); ++q) forks.push_back(ev.fork());
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t q = next++; q < parts.size(); q = next++) {
                    partial[q] = exhaustive_gic(forks[q], parts[q]).support;
                }
            });
        }
        for (auto& t : pool) t.join();
        for (const auto& f : forks) ev.absorb(f);
    }

    SupportSet joint;
    for (const auto& p : partial) joint = joint.unite(p);
    if (trace) {
        trace->partial = partial;
        trace->joint = joint;
    }

    // Step 4: sparsity-level correction over subsets of the joint estimate.
    RecoveryResult out = exhaustive_gic(ev, joint);
    out.method = "gm-gic";
    return out;
}

}  // namespace gsr
