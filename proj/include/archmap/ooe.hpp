#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "archmap/archspace.hpp"
#include "archmap/evo.hpp"
#include "archmap/ioe.hpp"

namespace archmap {

// Deterministic synthetic accuracy rule: a base score plus per-superblock
// contributions per gene, saturating at `cap`. Coefficients are invented
// stand-ins, not measured values.
struct SurrogateParams {
    double base = 82.0;
    std::map<GraphOp, double> op_bonus{{GraphOp::MaxRelative, 1.00},
                                       {GraphOp::EdgeConv, 1.17},
                                       {GraphOp::GraphSage, 1.03},
                                       {GraphOp::Gin, 0.08}};
    double depth_bonus = 0.30;   // per block above depth 2
    double ffn_bonus = 0.50;
    double fc_pre_bonus = 0.25;
    double width_bonus = 0.55;   // times log2(width / 96)
    double cap = 99.0;
};

class AccuracyModel {
public:
    enum class Kind { Table, Surrogate };

    static AccuracyModel surrogate(SurrogateParams params = SurrogateParams{});
    static AccuracyModel table(std::map<std::string, double> rows); // keyed by genome string
    static AccuracyModel load_table(const std::string &path);       // lines: <genome-string> <acc>

    double accuracy(const ArchitectureGenome &genome) const; // in [0, 100]
    Kind kind() const { return kind_; }

private:
    Kind kind_ = Kind::Surrogate;
    SurrogateParams params_;
    std::map<std::string, double> rows_;
};

struct OoeConfig {
    int population = 100;
    int generations = 50;        // evolution steps after the initial population
    double elite_fraction = 0.30;
    double mutation_prob = 0.4;  // per gene
    double crossover_prob = 0.5;
    double w_acc = 1.0;
    double w_lat = 1.0;
    double w_energy = 1.0;
    IoeConfig ioe;
    int threads = 1;

    void validate() const;
    static OoeConfig from_ini(const Ini &ini); // [ooe] + [ioe] sections
};

// 3-objective vector consumed by the non-dominated sort.
ObjectiveVector ooe_objectives(double accuracy, const PerfEval &eval);
// Weighted-product scalar acc^wa * (1/T)^wt * (1/E)^we, for within-front
// ordering and reports only.
double ooe_scalar(double accuracy, const PerfEval &eval, double w_acc, double w_lat, double w_energy);

// One (genome, mapping) pairing. The archive holds every pairing whose
// (accuracy, latency, energy) triple survives non-dominated filtering; the
// inner engine's chosen m* carries `best_mapping = true`.
struct CoSearchMember {
    ArchitectureGenome genome;
    std::vector<int> encoding;
    double accuracy = 0.0;
    PerfEval eval;
    MappingVector mapping;
    bool best_mapping = false;
    double mapping_fitness = 0.0; // ioe scalar of this mapping
    bool mapping_feasible = true;
    std::uint64_t ioe_seed = 0;
    double scalar = 0.0;
};

struct GenerationSnapshot {
    int generation = 0;
    // (accuracy, latency, energy) of every archive member, sorted
    std::vector<std::array<double, 3>> archive_points;
};

struct CoSearchResult {
    std::vector<CoSearchMember> pareto;      // final archive, deterministic order
    std::vector<GenerationSnapshot> history; // one snapshot per evaluated population
    std::uint64_t eval_count = 0;            // (genome, mapping) evaluations
    std::uint64_t genomes_evaluated = 0;
};

std::uint64_t derive_ioe_seed(std::uint64_t run_seed, const std::vector<int> &encoding);

CoSearchResult co_search(const SpaceConfig &space, const Platform &platform, const CostTable &table,
                         const AccuracyModel &acc_model, const OoeConfig &cfg, std::uint64_t seed);

// Same outer loop, but T/E come from the constant mapping on `cu_index`
// (hypervolume baseline; no inner search).
CoSearchResult standalone_only_search(const SpaceConfig &space, const Platform &platform, const CostTable &table,
                                      const AccuracyModel &acc_model, const OoeConfig &cfg, int cu_index,
                                      std::uint64_t seed);

} // namespace archmap
