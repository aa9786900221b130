#pragma once

// Shared test utilities: deterministic random instances and an independent
// boundary-centric re-implementation of the pipeline cost totals that the
// production unit-centric evaluation is checked against.

#include <string>
#include <vector>

#include "archmap/archspace.hpp"
#include "archmap/hwmodel.hpp"

namespace testutil {

using namespace archmap;

struct Instance {
    SpaceConfig space;
    ArchitectureGenome genome;
    WorkloadPlan plan;
    Platform platform;
    CostTable table;
};

inline Platform make_platform(int num_cus) {
    Platform p;
    p.name = "testplat";
    for (int c = 0; c < num_cus; ++c) {
        ComputeUnit cu;
        cu.id = "cu" + std::to_string(c);
        cu.letter = static_cast<char>('A' + c);
        p.cus.push_back(cu);
    }
    p.settings.push_back(DvfsSetting{"default", {}});
    p.validate();
    return p;
}

inline CostTable random_table(Rng &rng, const SpaceConfig &space, const Platform &platform,
                              double transfer_scale = 1.0) {
    CostTable table;
    std::uniform_real_distribution<double> lat(0.5, 3.0);
    std::uniform_real_distribution<double> energy(5.0, 40.0);
    std::uniform_real_distribution<double> tr_lat(0.0, 0.4);
    std::uniform_real_distribution<double> tr_energy(0.0, 3.0);
    for (const auto &sig : enumerate_signatures(space)) {
        for (const auto &cu : platform.cus) {
            for (const auto &setting : platform.settings) {
                CostRecord rec;
                rec.comp_latency = lat(rng);
                rec.comp_energy = energy(rng);
                rec.in_latency = tr_lat(rng) * transfer_scale;
                rec.out_latency = tr_lat(rng) * transfer_scale;
                rec.in_energy = tr_energy(rng) * transfer_scale;
                rec.out_energy = tr_energy(rng) * transfer_scale;
                table.insert(sig, cu.id, setting.label, rec);
            }
        }
    }
    return table;
}

// Random instance whose plan lands in [min_units, max_units].
inline Instance make_instance(Rng &rng, int num_cus, int min_units, int max_units) {
    Instance inst;
    std::uniform_int_distribution<int> sbs(1, 3);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        SpaceConfig cfg;
        cfg.superblock_count = sbs(rng);
        cfg.depth_values = {1, 2, 3};
        cfg.fc_pre_values = {0, 1};
        cfg.ffn_use_values = {0, 1};
        cfg.width_values = {96, 192};
        cfg.stage_dims.clear();
        for (int i = 0; i < cfg.superblock_count; ++i) cfg.stage_dims.push_back({196, 320, 12 + 4 * i});
        ArchitectureGenome g = random_genome(cfg, rng);
        WorkloadPlan plan = expand_architecture(g, Granularity::Blockwise, cfg);
        int units = static_cast<int>(plan.units.size());
        if (units < min_units || units > max_units) continue;
        inst.space = cfg;
        inst.genome = g;
        inst.plan = plan;
        inst.platform = make_platform(num_cus);
        inst.table = random_table(rng, cfg, inst.platform);
        return inst;
    }
    throw std::runtime_error("could not sample an instance in the requested unit range");
}

// Boundary-centric totals: compute costs summed first, then each CU switch
// adds the left unit's out-cost and the right unit's in-cost.
inline PerfEval naive_eval(const WorkloadPlan &plan, const std::vector<int> &assignments, const CostTable &table,
                           const Platform &platform, const std::string &dvfs_label) {
    PerfEval out;
    std::vector<const CostRecord *> recs;
    for (std::size_t i = 0; i < plan.units.size(); ++i) {
        recs.push_back(&table.at(plan.units[i], platform.cus[assignments[i]].id, dvfs_label));
        out.total_latency += recs[i]->comp_latency;
        out.total_energy += recs[i]->comp_energy;
    }
    for (std::size_t b = 0; b + 1 < plan.units.size(); ++b) {
        if (assignments[b] == assignments[b + 1]) continue;
        ++out.transitions;
        out.total_latency += recs[b]->out_latency + recs[b + 1]->in_latency;
        out.total_energy += recs[b]->out_energy + recs[b + 1]->in_energy;
    }
    return out;
}

inline std::vector<int> random_mapping(Rng &rng, std::size_t units, int num_cus) {
    std::uniform_int_distribution<int> d(0, num_cus - 1);
    std::vector<int> m(units);
    for (auto &x : m) x = d(rng);
    return m;
}

} // namespace testutil
