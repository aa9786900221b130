#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "archmap/archspace.hpp"
#include "archmap/common.hpp"
#include "archmap/config.hpp"

namespace archmap {

// Eq.-5-style support predicate: a CU runs everything except the kinds/ops it
// explicitly excludes. Stem and Classifier may never be excluded.
struct CuCapability {
    std::vector<UnitKind> unsupported_kinds;
    std::vector<GraphOp> unsupported_ops;

    bool supports(const UnitSignature &sig) const;
};

struct ComputeUnit {
    std::string id;
    char letter = '?';           // single-letter tag used in mapping strings
    std::string clock_domain;    // empty when the platform declares no clocks
    CuCapability capability;
};

struct ClockDomain {
    std::string name;
    std::vector<int> values_mhz;
};

// One global clock configuration; per-domain values parallel Platform::domains.
struct DvfsSetting {
    std::string label;
    std::vector<int> clocks_mhz;
};

struct Platform {
    std::string name;
    std::vector<ComputeUnit> cus;
    std::vector<ClockDomain> domains;
    std::vector<DvfsSetting> settings;  // at least one; enumeration order is the tie-break order
    int default_setting = 0;
    double cycles_per_ms = 0.0;         // >0 when the source profile counts cycles

    int cu_index(const std::string &id) const;         // -1 when unknown
    int require_cu(const std::string &id) const;       // throws ValidationError
    int setting_index(const std::string &label) const; // -1 when unknown
    void validate() const;
};

struct CostRecord {
    double comp_latency = 0.0;
    double comp_energy = 0.0;
    double in_latency = 0.0;
    double out_latency = 0.0;
    double in_energy = 0.0;
    double out_energy = 0.0;

    void validate(const std::string &context) const; // all fields finite and >= 0
};

// Signature fields participating in a table's lookup key. Tables keyed on a
// subset (e.g. ignoring the superblock index) can serve several stages with
// one row.
struct KeyFields {
    bool kind = true;
    bool superblock = true;
    bool op = true;
    bool nodes = true;
    bool dim = true;
    bool k = true;
    bool width = true;
    bool fc_pre = true;

    std::string mask_string() const;
    static KeyFields from_mask_string(const std::string &mask);
};

class CostTable {
public:
    KeyFields key_fields;

    std::string make_key(const UnitSignature &sig, const std::string &cu_id, const std::string &dvfs_label) const;
    void insert(const UnitSignature &sig, const std::string &cu_id, const std::string &dvfs_label,
                const CostRecord &rec);
    const CostRecord *find(const UnitSignature &sig, const std::string &cu_id, const std::string &dvfs_label) const;
    // Throws LookupError naming the (signature, CU, DVFS) triple.
    const CostRecord &at(const UnitSignature &sig, const std::string &cu_id, const std::string &dvfs_label) const;

    std::size_t size() const { return entries_.size(); }
    const std::vector<std::string> &row_order() const { return row_order_; }
    const CostRecord &row(const std::string &key) const { return entries_.at(key); }

private:
    std::unordered_map<std::string, CostRecord> entries_;
    std::vector<std::string> row_order_; // file/insertion order, for stable serialization
};

struct MappingVector {
    std::vector<int> assignments; // CU index per plan unit
    int dvfs = 0;                 // setting index into Platform::settings
};

struct PerfEval {
    double total_latency = 0.0;
    double total_energy = 0.0;
    int transitions = 0;
    std::vector<std::pair<double, double>> per_unit; // optional (latency, energy) breakdown
};

// Transfer-aware pipeline totals (Eq. 6/7 shape): a unit pays its in-transfer
// when the previous unit sits on a different CU and its out-transfer when the
// next one does. First unit pays no in-cost, last pays no out-cost.
PerfEval evaluate(const WorkloadPlan &plan, const MappingVector &mapping, const CostTable &table,
                  const Platform &platform, bool with_breakdown = false);

// Constant mapping on one CU; throws InfeasibleError when the CU lacks
// support for some unit.
PerfEval standalone_eval(const WorkloadPlan &plan, int cu_index, const CostTable &table,
                         const Platform &platform, int dvfs_setting);

// Pre-resolved (unit x CU) cost matrix for one DVFS setting; the evaluation
// path used by the search inner loops. Construction validates table totality
// over every feasible pair.
class PlanCostView {
public:
    PlanCostView(const WorkloadPlan &plan, const CostTable &table, const Platform &platform, int dvfs_setting);

    int unit_count() const { return static_cast<int>(records_.size()); }
    int cu_count() const { return num_cus_; }
    int dvfs_setting() const { return dvfs_; }
    const std::vector<int> &feasible_cus(std::size_t unit) const { return feasible_[unit]; }
    bool cu_feasible(std::size_t unit, int cu) const { return records_[unit][cu] != nullptr; }

    PerfEval eval(const std::vector<int> &assignments) const;
    void eval_totals(const std::vector<int> &assignments, double &latency, double &energy, int &transitions) const;

private:
    std::vector<std::vector<const CostRecord *>> records_; // [unit][cu], null = unsupported
    std::vector<std::vector<int>> feasible_;
    int num_cus_ = 0;
    int dvfs_ = 0;
};

// ---- synthetic profiles ----

struct SynthCuSpec {
    std::string id;
    char letter = 0; // 0 = derive from id
    std::string clock_domain;
    double lat_mult = 1.0;
    double energy_mult = 1.0;
    std::map<UnitKind, double> kind_lat_mult;    // per-kind affinity tilts, default 1.0
    std::map<UnitKind, double> kind_energy_mult;
    std::vector<UnitKind> unsupported_kinds;
    std::vector<GraphOp> unsupported_ops;
};

struct SynthSpec {
    std::string name;
    std::vector<SynthCuSpec> cus;
    std::map<UnitKind, double> base_lat_ms;
    std::map<UnitKind, double> base_energy_mj;
    std::map<GraphOp, double> op_lat_mult;
    std::map<GraphOp, double> op_energy_mult;
    double transfer_lat_scale = 0.05;   // ms per normalized feature tensor
    double transfer_energy_scale = 0.8; // mJ per normalized feature tensor
    double jitter = 0.04;               // deterministic per-(unit, CU) spread
    std::vector<ClockDomain> domains;
    std::string transfer_domain; // clock domain scaling the shared-memory path
    double dvfs_lat_exp = 1.0;
    double dvfs_energy_dyn = 0.7;    // dynamic energy share, ~(f/f_ref)^2
    double dvfs_energy_static = 0.3; // static share, grows as runtime stretches

    static SynthSpec xavier_like();  // 2 CUs: gpu ~2x faster, dla ~2x more energy-efficient
    static SynthSpec maestro_3cu();  // 3 DSAs with distinct per-kind affinities
    static SynthSpec preset(const std::string &name); // throws with the preset list
    static std::vector<std::string> preset_names();
    static SynthSpec from_ini(const Ini &ini);

    void validate() const;
};

Platform platform_from_synth(const SynthSpec &spec);

// Every unit signature the configured space can produce, both granularities,
// enumeration order fixed (drives deterministic profile generation).
std::vector<UnitSignature> enumerate_signatures(const SpaceConfig &space);

// Deterministic for a given (seed, spec, space); covers the full signature
// universe on every CU and DVFS setting.
CostTable synth_profile(std::uint64_t seed, const SynthSpec &spec, const SpaceConfig &space);

// ---- file formats ----

std::string cost_table_to_string(const CostTable &table);
CostTable cost_table_from_string(const std::string &text, const std::string &origin,
                                 const Platform *platform = nullptr);
CostTable load_cost_table(const std::string &path, const Platform *platform = nullptr);
void save_cost_table(const std::string &path, const CostTable &table);

std::string platform_to_string(const Platform &platform);
Platform platform_from_ini(const Ini &ini);
Platform load_platform(const std::string &path);
void save_platform(const std::string &path, const Platform &platform);

// Load-time coverage check: reports every missing (unit, CU, DVFS) triple for
// the given plan (or signature universe) instead of stopping at the first.
std::vector<std::string> missing_cost_entries(const CostTable &table, const Platform &platform,
                                              const std::vector<UnitSignature> &signatures);

std::string mapping_to_string(const WorkloadPlan &plan, const std::vector<int> &assignments,
                              const Platform &platform);
std::vector<double> cu_utilization(const std::vector<int> &assignments, int num_cus);

} // namespace archmap
