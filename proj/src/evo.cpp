#include "archmap/evo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace archmap {

ObjectiveVector::ObjectiveVector(std::vector<double> v, std::vector<Sense> s)
    : values(std::move(v)), senses(std::move(s)) {
    if (values.size() != senses.size())
        throw ValidationError("objective vector: values/senses length mismatch");
    for (double x : values)
        if (!std::isfinite(x)) throw ValidationError("objective vector: non-finite value");
}

ObjectiveVector ObjectiveVector::minimize(std::vector<double> v) {
    std::vector<Sense> s(v.size(), Sense::Minimize);
    return ObjectiveVector(std::move(v), std::move(s));
}

static void check_comparable(const ObjectiveVector &a, const ObjectiveVector &b) {
    if (a.values.size() != b.values.size() || a.senses != b.senses)
        throw ValidationError("objective vectors are not comparable (length or sense mismatch)");
}

bool dominates(const ObjectiveVector &a, const ObjectiveVector &b) {
    check_comparable(a, b);
    bool strictly_better = false;
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        double av = a.values[k], bv = b.values[k];
        if (a.senses[k] == Sense::Maximize) {
            av = -av;
            bv = -bv;
        }
        if (av > bv) return false;
        if (av < bv) strictly_better = true;
    }
    return strictly_better;
}

std::vector<std::vector<std::size_t>> nondominated_sort(const std::vector<ObjectiveVector> &pop) {
    if (pop.empty()) throw ValidationError("nondominated_sort: empty population");
    const std::size_t n = pop.size();
    std::vector<std::vector<std::size_t>> dominated_by(n);
    std::vector<int> dom_count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(pop[i], pop[j])) {
                dominated_by[i].push_back(j);
                ++dom_count[j];
            } else if (dominates(pop[j], pop[i])) {
                dominated_by[j].push_back(i);
                ++dom_count[i];
            }
        }
    }
    std::vector<std::vector<std::size_t>> fronts;
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i)
        if (dom_count[i] == 0) current.push_back(i);
    while (!current.empty()) {
        fronts.push_back(current);
        std::vector<std::size_t> next;
        for (std::size_t i : current) {
            for (std::size_t j : dominated_by[i]) {
                if (--dom_count[j] == 0) next.push_back(j);
            }
        }
        std::sort(next.begin(), next.end());
        current = std::move(next);
    }
    return fronts;
}

std::vector<double> crowding_distance(const std::vector<ObjectiveVector> &front) {
    if (front.empty()) throw ValidationError("crowding_distance: empty front");
    const std::size_t n = front.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, 0.0);
    if (n <= 2) {
        std::fill(dist.begin(), dist.end(), inf);
        return dist;
    }
    const std::size_t m = front[0].values.size();
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < m; ++k) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return front[a].values[k] < front[b].values[k];
        });
        double lo = front[order.front()].values[k];
        double hi = front[order.back()].values[k];
        dist[order.front()] = inf;
        dist[order.back()] = inf;
        if (hi <= lo) continue; // degenerate objective, contributes nothing
        for (std::size_t i = 1; i + 1 < n; ++i) {
            std::size_t idx = order[i];
            if (dist[idx] == inf) continue;
            dist[idx] += (front[order[i + 1]].values[k] - front[order[i - 1]].values[k]) / (hi - lo);
        }
    }
    return dist;
}

RankInfo rank_population(const std::vector<ObjectiveVector> &pop) {
    RankInfo info;
    info.fronts = nondominated_sort(pop);
    info.rank.assign(pop.size(), 0);
    info.crowding.assign(pop.size(), 0.0);
    for (std::size_t f = 0; f < info.fronts.size(); ++f) {
        std::vector<ObjectiveVector> sub;
        sub.reserve(info.fronts[f].size());
        for (std::size_t idx : info.fronts[f]) sub.push_back(pop[idx]);
        std::vector<double> cd = crowding_distance(sub);
        for (std::size_t i = 0; i < info.fronts[f].size(); ++i) {
            info.rank[info.fronts[f][i]] = static_cast<int>(f);
            info.crowding[info.fronts[f][i]] = cd[i];
        }
    }
    return info;
}

bool nsga_less(const RankInfo &info, std::size_t a, std::size_t b) {
    if (info.rank[a] != info.rank[b]) return info.rank[a] < info.rank[b];
    if (info.crowding[a] != info.crowding[b]) return info.crowding[a] > info.crowding[b];
    return a < b;
}

std::size_t tournament_pick(Rng &rng, const RankInfo &info, const std::vector<std::size_t> &candidates) {
    if (candidates.empty()) throw ValidationError("tournament_pick: no candidates");
    std::uniform_int_distribution<std::size_t> dist(0, candidates.size() - 1);
    std::size_t a = candidates[dist(rng)];
    std::size_t b = candidates[dist(rng)];
    return nsga_less(info, a, b) ? a : b;
}

void ParetoArchive::insert(std::uint64_t payload, const ObjectiveVector &objectives) {
    update({ArchiveMember{payload, objectives, 0}});
}

void ParetoArchive::update(const std::vector<ArchiveMember> &candidates) {
    for (const ArchiveMember &cand : candidates) {
        bool rejected = false;
        for (const ArchiveMember &m : members_) {
            if (m.objectives.values == cand.objectives.values || dominates(m.objectives, cand.objectives)) {
                rejected = true; // duplicate keeps the earliest payload
                break;
            }
        }
        if (rejected) continue;
        members_.erase(std::remove_if(members_.begin(), members_.end(),
                                      [&](const ArchiveMember &m) {
                                          return dominates(cand.objectives, m.objectives);
                                      }),
                       members_.end());
        members_.push_back(ArchiveMember{cand.payload, cand.objectives, next_seq_++});
    }
    enforce_capacity();
}

void ParetoArchive::enforce_capacity() {
    if (!capacity_ || members_.size() <= *capacity_) return;
    std::vector<ObjectiveVector> objs;
    objs.reserve(members_.size());
    for (const auto &m : members_) objs.push_back(m.objectives);
    std::vector<double> cd = crowding_distance(objs);
    std::vector<std::size_t> order(members_.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (cd[a] != cd[b]) return cd[a] > cd[b];
        return members_[a].seq < members_[b].seq;
    });
    order.resize(*capacity_);
    std::sort(order.begin(), order.end());
    std::vector<ArchiveMember> kept;
    kept.reserve(order.size());
    for (std::size_t idx : order) kept.push_back(members_[idx]);
    members_ = std::move(kept);
}

} // namespace archmap
