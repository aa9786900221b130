#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "archmap/common.hpp"

namespace archmap {

enum class Sense { Minimize, Maximize };

struct ObjectiveVector {
    std::vector<double> values;
    std::vector<Sense> senses;

    ObjectiveVector() = default;
    ObjectiveVector(std::vector<double> v, std::vector<Sense> s);

    // All-minimize convenience, the common case for (latency, energy).
    static ObjectiveVector minimize(std::vector<double> v);

    bool operator==(const ObjectiveVector &other) const {
        return values == other.values && senses == other.senses;
    }
};

// Pareto dominance per the configured senses: at least as good everywhere,
// strictly better somewhere.
bool dominates(const ObjectiveVector &a, const ObjectiveVector &b);

// Fast non-dominated sort. Front 0 is the maximal non-dominated set; each
// index of the population appears in exactly one front.
std::vector<std::vector<std::size_t>> nondominated_sort(const std::vector<ObjectiveVector> &pop);

// Crowding distance for one front. Boundary members (and all members of
// fronts of size <= 2) get +inf; degenerate objectives contribute 0.
std::vector<double> crowding_distance(const std::vector<ObjectiveVector> &front);

struct RankInfo {
    std::vector<int> rank;         // front index per member
    std::vector<double> crowding;  // crowding distance per member
    std::vector<std::vector<std::size_t>> fronts;
};

RankInfo rank_population(const std::vector<ObjectiveVector> &pop);

// (rank asc, crowding desc, index asc) — the NSGA-II comparison key.
bool nsga_less(const RankInfo &info, std::size_t a, std::size_t b);

// Binary tournament among `candidates` (positions into the ranked population).
std::size_t tournament_pick(Rng &rng, const RankInfo &info, const std::vector<std::size_t> &candidates);

struct ArchiveMember {
    std::uint64_t payload = 0;     // caller-defined id into its own storage
    ObjectiveVector objectives;
    std::uint64_t seq = 0;         // insertion order, drives tie-handling
};

// Non-dominated archive. Candidates that duplicate an existing member's
// objective vector are dropped (earliest payload wins); dominated members are
// evicted on insertion. Optional capacity keeps the most spread members by
// crowding distance.
class ParetoArchive {
public:
    explicit ParetoArchive(std::optional<std::size_t> capacity = std::nullopt) : capacity_(capacity) {}

    void update(const std::vector<ArchiveMember> &candidates);
    void insert(std::uint64_t payload, const ObjectiveVector &objectives);

    const std::vector<ArchiveMember> &members() const { return members_; }
    bool empty() const { return members_.empty(); }
    std::size_t size() const { return members_.size(); }
    void clear() { members_.clear(); }

private:
    void enforce_capacity();

    std::optional<std::size_t> capacity_;
    std::vector<ArchiveMember> members_;
    std::uint64_t next_seq_ = 0;
};

} // namespace archmap
