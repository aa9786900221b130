#include "archmap/ooe.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <sstream>

namespace archmap {

AccuracyModel AccuracyModel::surrogate(SurrogateParams params) {
    AccuracyModel m;
    m.kind_ = Kind::Surrogate;
    m.params_ = std::move(params);
    return m;
}

AccuracyModel AccuracyModel::table(std::map<std::string, double> rows) {
    AccuracyModel m;
    m.kind_ = Kind::Table;
    m.rows_ = std::move(rows);
    for (const auto &kv : m.rows_)
        if (kv.second < 0.0 || kv.second > 100.0)
            throw ValidationError("accuracy table entry out of [0,100] for " + kv.first);
    return m;
}

AccuracyModel AccuracyModel::load_table(const std::string &path) {
    std::map<std::string, double> rows;
    std::istringstream in(read_file(path));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t ws = t.find_last_of(" \t");
        if (ws == std::string::npos)
            throw ValidationError(path + ":" + std::to_string(lineno) + ": expected '<genome-string> <accuracy>'");
        std::string genome_str = trim(t.substr(0, ws));
        double acc = parse_double(trim(t.substr(ws + 1)), "accuracy");
        // normalize through the parser so key formatting is canonical
        ArchitectureGenome g = parse_genome_string(genome_str, BackboneKind::Isotropic);
        if (!rows.emplace(genome_to_string(g), acc).second)
            throw ValidationError(path + ":" + std::to_string(lineno) + ": duplicate genome entry");
    }
    if (rows.empty()) throw ValidationError(path + ": empty accuracy table");
    return table(std::move(rows));
}

double AccuracyModel::accuracy(const ArchitectureGenome &genome) const {
    if (kind_ == Kind::Table) {
        auto it = rows_.find(genome_to_string(genome));
        if (it == rows_.end())
            throw LookupError("accuracy table has no entry for genome " + genome_to_string(genome));
        return it->second;
    }
    double acc = params_.base;
    for (const auto &sb : genome.superblocks) {
        auto it = params_.op_bonus.find(sb.graph_op);
        acc += it != params_.op_bonus.end() ? it->second : 0.0;
        acc += params_.depth_bonus * (sb.depth - 2);
        if (sb.ffn_use) acc += params_.ffn_bonus;
        if (sb.fc_pre_use) acc += params_.fc_pre_bonus;
        if (sb.ffn_width > 0) acc += params_.width_bonus * std::log2(sb.ffn_width / 96.0);
    }
    return std::clamp(acc, 0.0, params_.cap);
}

void OoeConfig::validate() const {
    if (population < 1) throw ValidationError("[ooe] population must be >= 1");
    if (generations < 0) throw ValidationError("[ooe] generations must be >= 0");
    if (!(elite_fraction > 0.0 && elite_fraction <= 1.0))
        throw ValidationError("[ooe] elite_fraction must be in (0,1]");
    auto prob = [](double p, const char *what) {
        if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(std::string("[ooe] ") + what + " must be in [0,1]");
    };
    prob(mutation_prob, "mutation_prob");
    prob(crossover_prob, "crossover_prob");
    if (!std::isfinite(w_acc) || !std::isfinite(w_lat) || !std::isfinite(w_energy))
        throw ValidationError("[ooe] fitness weights must be finite");
    ioe.validate();
}

OoeConfig OoeConfig::from_ini(const Ini &ini) {
    OoeConfig cfg;
    const std::string sec = "ooe";
    cfg.population = static_cast<int>(ini.get_int(sec, "population", cfg.population));
    cfg.generations = static_cast<int>(ini.get_int(sec, "generations", cfg.generations));
    cfg.elite_fraction = ini.get_double(sec, "elite_fraction", cfg.elite_fraction);
    cfg.mutation_prob = ini.get_double(sec, "mutation_prob", cfg.mutation_prob);
    cfg.crossover_prob = ini.get_double(sec, "crossover_prob", cfg.crossover_prob);
    std::vector<double> w = ini.get_double_list(sec, "weights");
    if (!w.empty()) {
        if (w.size() != 3) throw ValidationError("[ooe] weights must list exactly (w_acc, w_lat, w_energy)");
        cfg.w_acc = w[0];
        cfg.w_lat = w[1];
        cfg.w_energy = w[2];
    }
    cfg.ioe = IoeConfig::from_ini(ini);
    cfg.validate();
    return cfg;
}

ObjectiveVector ooe_objectives(double accuracy, const PerfEval &eval) {
    if (accuracy < 0.0 || accuracy > 100.0)
        throw ValidationError("ooe_objectives: accuracy must be in [0,100]");
    return ObjectiveVector({accuracy, eval.total_latency, eval.total_energy},
                           {Sense::Maximize, Sense::Minimize, Sense::Minimize});
}

double ooe_scalar(double accuracy, const PerfEval &eval, double w_acc, double w_lat, double w_energy) {
    if (w_lat != 0.0 && !(eval.total_latency > 0))
        throw ValidationError("ooe_scalar: nonpositive latency with nonzero weight");
    if (w_energy != 0.0 && !(eval.total_energy > 0))
        throw ValidationError("ooe_scalar: nonpositive energy with nonzero weight");
    double s = std::pow(accuracy, w_acc);
    if (w_lat != 0.0) s *= std::pow(eval.total_latency, -w_lat);
    if (w_energy != 0.0) s *= std::pow(eval.total_energy, -w_energy);
    return s;
}

std::uint64_t derive_ioe_seed(std::uint64_t run_seed, const std::vector<int> &encoding) {
    std::uint64_t h = fnv1a64(&run_seed, sizeof(run_seed));
    return fnv1a64(encoding, h);
}

namespace {

struct EvaluatedGenome {
    CoSearchMember member;                 // the m* pairing for this genome
    std::vector<CoSearchMember> pairings;  // m* first, then the rest of the mapping front
    ObjectiveVector objectives;            // (acc, T_m*, E_m*) used to rank the population
    std::uint64_t plan_evals = 1;
    std::size_t pool_base = 0;
};

// Shared outer loop; `standalone_cu >= 0` switches the evaluation path from
// the nested IOE to the fixed-CU standalone baseline.
CoSearchResult run_outer(const SpaceConfig &space, const Platform &platform, const CostTable &table,
                         const AccuracyModel &acc_model, const OoeConfig &cfg, int standalone_cu,
                         std::uint64_t seed) {
    space.validate();
    cfg.validate();
    platform.validate();

    CoSearchResult result;
    Rng rng(seed);

    std::vector<EvaluatedGenome> store;          // every distinct evaluated genome
    std::map<std::vector<int>, std::size_t> memo; // encoding -> store index
    std::vector<std::pair<std::size_t, std::size_t>> pool; // archive payload -> (store, pairing)
    ParetoArchive archive;

    IoeConfig ioe_cfg = cfg.ioe;
    ioe_cfg.threads = 1; // outer loop parallelizes across genomes

    auto evaluate_new = [&](const std::vector<std::vector<int>> &encodings) {
        std::vector<EvaluatedGenome> fresh(encodings.size());
        parallel_for(encodings.size(), cfg.threads, [&](std::size_t i) {
            ArchitectureGenome genome = decode_genome(encodings[i], space.backbone);
            EvaluatedGenome eg;
            eg.member.genome = genome;
            eg.member.encoding = encodings[i];
            eg.member.accuracy = acc_model.accuracy(genome);
            eg.member.ioe_seed = derive_ioe_seed(seed, encodings[i]);
            WorkloadPlan plan = expand_architecture(genome, space.granularity, space);
            if (standalone_cu >= 0) {
                eg.member.eval = standalone_eval(plan, standalone_cu, table, platform, platform.default_setting);
                eg.member.mapping.assignments.assign(plan.units.size(), standalone_cu);
                eg.member.mapping.dvfs = platform.default_setting;
                StandaloneRefs refs = standalone_refs(plan, table, platform, platform.default_setting);
                eg.member.mapping_fitness = ioe_fitness(eg.member.eval, refs, ioe_cfg.gamma1, ioe_cfg.gamma2);
                eg.member.mapping_feasible = true;
                eg.member.best_mapping = true;
                eg.pairings.push_back(eg.member);
            } else {
                IoeResult ir = search_mappings(plan, table, platform, ioe_cfg, eg.member.ioe_seed);
                eg.member.eval = ir.best_eval;
                eg.member.mapping = ir.best_mapping;
                eg.member.mapping_fitness = ir.best_fitness;
                eg.member.mapping_feasible = ir.feasible;
                eg.member.best_mapping = true;
                eg.plan_evals = ir.evaluations;
                // the full mapping front feeds the outer archive (m* first so
                // duplicate objectives keep the flagged pairing)
                eg.pairings.push_back(eg.member);
                for (const auto &cand : ir.pareto) {
                    CoSearchMember pm = eg.member;
                    pm.best_mapping = false;
                    pm.eval = PerfEval{cand.latency, cand.energy, cand.transitions, {}};
                    pm.mapping.assignments = cand.assignments;
                    pm.mapping.dvfs = ir.ea_dvfs_setting;
                    pm.mapping_fitness =
                        ioe_fitness(pm.eval, ir.normalization, ioe_cfg.gamma1, ioe_cfg.gamma2);
                    pm.scalar = ooe_scalar(pm.accuracy, pm.eval, cfg.w_acc, cfg.w_lat, cfg.w_energy);
                    eg.pairings.push_back(std::move(pm));
                }
            }
            eg.member.scalar = ooe_scalar(eg.member.accuracy, eg.member.eval, cfg.w_acc, cfg.w_lat, cfg.w_energy);
            eg.pairings.front().scalar = eg.member.scalar;
            eg.objectives = ooe_objectives(eg.member.accuracy, eg.member.eval);
            fresh[i] = std::move(eg);
        });
        for (auto &eg : fresh) {
            result.eval_count += eg.plan_evals;
            ++result.genomes_evaluated;
            eg.pool_base = pool.size();
            for (std::size_t j = 0; j < eg.pairings.size(); ++j) pool.emplace_back(store.size(), j);
            memo.emplace(eg.member.encoding, store.size());
            store.push_back(std::move(eg));
        }
    };

    auto ensure_evaluated = [&](const std::vector<std::vector<int>> &pop) {
        std::vector<std::vector<int>> fresh;
        std::set<std::vector<int>> seen;
        for (const auto &enc : pop)
            if (!memo.count(enc) && seen.insert(enc).second) fresh.push_back(enc);
        if (!fresh.empty()) evaluate_new(fresh);
    };

    auto snapshot = [&](int generation) {
        GenerationSnapshot snap;
        snap.generation = generation;
        for (const auto &m : archive.members()) {
            const auto &v = m.objectives.values;
            snap.archive_points.push_back({v[0], v[1], v[2]});
        }
        std::sort(snap.archive_points.begin(), snap.archive_points.end(),
                  [](const std::array<double, 3> &a, const std::array<double, 3> &b) {
                      if (a[0] != b[0]) return a[0] > b[0];
                      if (a[1] != b[1]) return a[1] < b[1];
                      return a[2] < b[2];
                  });
        result.history.push_back(std::move(snap));
    };

    // initial population: the whole space when it fits, random sampling otherwise
    std::vector<std::vector<int>> pop;
    BigCount card = genome_space_cardinality(space);
    if (card <= static_cast<BigCount>(cfg.population)) {
        for (const auto &g : enumerate_space(space)) pop.push_back(encode_genome(g));
    } else {
        for (int i = 0; i < cfg.population; ++i) pop.push_back(encode_genome(random_genome(space, rng)));
    }

    for (int g = 0; g <= cfg.generations; ++g) {
        ensure_evaluated(pop);
        std::vector<ArchiveMember> cands;
        std::set<std::size_t> offered; // a genome repeated in the population feeds the archive once
        for (const auto &enc : pop) {
            std::size_t idx = memo.at(enc);
            if (!offered.insert(idx).second) continue;
            const EvaluatedGenome &eg = store[idx];
            for (std::size_t j = 0; j < eg.pairings.size(); ++j)
                cands.push_back(ArchiveMember{
                    eg.pool_base + j, ooe_objectives(eg.pairings[j].accuracy, eg.pairings[j].eval), 0});
        }
        archive.update(cands);
        snapshot(g);
        if (g == cfg.generations) break;

        // rank current population, cut elites, refill by variation
        std::vector<ObjectiveVector> objs;
        objs.reserve(pop.size());
        for (const auto &enc : pop) objs.push_back(store[memo.at(enc)].objectives);
        RankInfo info = rank_population(objs);
        std::vector<std::size_t> order(pop.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        // within a front the weighted-product scalar decides the elite order
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (info.rank[a] != info.rank[b]) return info.rank[a] < info.rank[b];
            double sa = store[memo.at(pop[a])].member.scalar;
            double sb = store[memo.at(pop[b])].member.scalar;
            if (sa != sb) return sa > sb;
            return a < b;
        });
        std::size_t elite_count = static_cast<std::size_t>(
            std::ceil(cfg.elite_fraction * static_cast<double>(cfg.population)));
        elite_count = std::max<std::size_t>(1, std::min(elite_count, order.size()));
        std::vector<std::size_t> elites(order.begin(), order.begin() + static_cast<long>(elite_count));

        std::vector<std::vector<int>> next;
        next.reserve(static_cast<std::size_t>(cfg.population));
        for (std::size_t e : elites) next.push_back(pop[e]);
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        while (static_cast<int>(next.size()) < cfg.population) {
            std::size_t pa = tournament_pick(rng, info, elites);
            std::size_t pb = tournament_pick(rng, info, elites);
            ArchitectureGenome ga = store[memo.at(pop[pa])].member.genome;
            ArchitectureGenome gb = store[memo.at(pop[pb])].member.genome;
            ArchitectureGenome c1 = ga, c2 = gb;
            if (coin(rng) < cfg.crossover_prob) std::tie(c1, c2) = crossover_genomes(ga, gb, rng);
            mutate_genome(c1, space, rng, cfg.mutation_prob);
            mutate_genome(c2, space, rng, cfg.mutation_prob);
            next.push_back(encode_genome(c1));
            if (static_cast<int>(next.size()) < cfg.population) next.push_back(encode_genome(c2));
        }
        pop = std::move(next);
    }

    for (const auto &m : archive.members()) {
        const auto &[si, pj] = pool[m.payload];
        result.pareto.push_back(store[si].pairings[pj]);
    }
    std::sort(result.pareto.begin(), result.pareto.end(), [](const CoSearchMember &a, const CoSearchMember &b) {
        if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
        if (a.eval.total_latency != b.eval.total_latency) return a.eval.total_latency < b.eval.total_latency;
        if (a.eval.total_energy != b.eval.total_energy) return a.eval.total_energy < b.eval.total_energy;
        if (a.encoding != b.encoding) return a.encoding < b.encoding;
        return a.mapping.assignments < b.mapping.assignments;
    });
    return result;
}

} // namespace

CoSearchResult co_search(const SpaceConfig &space, const Platform &platform, const CostTable &table,
                         const AccuracyModel &acc_model, const OoeConfig &cfg, std::uint64_t seed) {
    return run_outer(space, platform, table, acc_model, cfg, -1, seed);
}

CoSearchResult standalone_only_search(const SpaceConfig &space, const Platform &platform, const CostTable &table,
                                      const AccuracyModel &acc_model, const OoeConfig &cfg, int cu_index,
                                      std::uint64_t seed) {
    if (cu_index < 0 || cu_index >= static_cast<int>(platform.cus.size()))
        throw ValidationError("standalone_only_search: CU index out of range");
    return run_outer(space, platform, table, acc_model, cfg, cu_index, seed);
}

} // namespace archmap
