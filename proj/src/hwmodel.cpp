#include "archmap/hwmodel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

namespace archmap {

bool CuCapability::supports(const UnitSignature &sig) const {
    for (UnitKind k : unsupported_kinds)
        if (k == sig.kind) return false;
    if (sig.graph_op) {
        for (GraphOp op : unsupported_ops)
            if (op == *sig.graph_op) return false;
    }
    return true;
}

int Platform::cu_index(const std::string &id) const {
    for (std::size_t i = 0; i < cus.size(); ++i)
        if (cus[i].id == id) return static_cast<int>(i);
    return -1;
}

int Platform::require_cu(const std::string &id) const {
    int idx = cu_index(id);
    if (idx < 0) throw ValidationError("unknown CU id '" + id + "' on platform '" + name + "'");
    return idx;
}

int Platform::setting_index(const std::string &label) const {
    for (std::size_t i = 0; i < settings.size(); ++i)
        if (settings[i].label == label) return static_cast<int>(i);
    return -1;
}

void Platform::validate() const {
    if (cus.empty()) throw ValidationError("platform '" + name + "' declares no CUs");
    std::set<std::string> ids;
    std::set<char> letters;
    for (const auto &cu : cus) {
        if (cu.id.empty()) throw ValidationError("platform CU with empty id");
        if (!ids.insert(cu.id).second) throw ValidationError("duplicate CU id '" + cu.id + "'");
        if (!letters.insert(cu.letter).second)
            throw ValidationError(std::string("duplicate CU letter '") + cu.letter + "'");
        for (UnitKind k : cu.capability.unsupported_kinds)
            if (k == UnitKind::Stem || k == UnitKind::Classifier)
                throw ValidationError("CU '" + cu.id + "' must support stem and classifier units");
        if (!cu.clock_domain.empty()) {
            bool found = false;
            for (const auto &d : domains) found |= (d.name == cu.clock_domain);
            if (!found)
                throw ValidationError("CU '" + cu.id + "' references unknown clock domain '" + cu.clock_domain + "'");
        }
    }
    if (settings.empty()) throw ValidationError("platform '" + name + "' has no DVFS settings");
    std::set<std::string> labels;
    for (const auto &s : settings) {
        if (!labels.insert(s.label).second) throw ValidationError("duplicate DVFS setting label '" + s.label + "'");
        if (s.clocks_mhz.size() != domains.size())
            throw ValidationError("DVFS setting '" + s.label + "' clock count != domain count");
    }
    if (default_setting < 0 || default_setting >= static_cast<int>(settings.size()))
        throw ValidationError("platform default DVFS setting out of range");
    if (cycles_per_ms < 0) throw ValidationError("cycles_per_ms must be >= 0");
}

void CostRecord::validate(const std::string &context) const {
    const double vals[6] = {comp_latency, comp_energy, in_latency, out_latency, in_energy, out_energy};
    static const char *names[6] = {"comp_latency", "comp_energy", "in_latency",
                                   "out_latency",  "in_energy",   "out_energy"};
    for (int i = 0; i < 6; ++i) {
        if (!std::isfinite(vals[i]) || vals[i] < 0)
            throw ValidationError(context + ": " + names[i] + " must be finite and >= 0, got " +
                                  std::to_string(vals[i]));
    }
}

std::string KeyFields::mask_string() const {
    std::string out;
    auto add = [&](bool on, const char *name) {
        if (!on) return;
        if (!out.empty()) out += ",";
        out += name;
    };
    add(kind, "kind");
    add(superblock, "superblock");
    add(op, "op");
    add(nodes, "nodes");
    add(dim, "dim");
    add(k, "k");
    add(width, "width");
    add(fc_pre, "fc_pre");
    return out;
}

KeyFields KeyFields::from_mask_string(const std::string &mask) {
    KeyFields kf;
    kf.kind = kf.superblock = kf.op = kf.nodes = kf.dim = kf.k = kf.width = kf.fc_pre = false;
    for (const auto &tok : split_list(mask)) {
        std::string t = to_lower(tok);
        if (t == "kind") kf.kind = true;
        else if (t == "superblock") kf.superblock = true;
        else if (t == "op") kf.op = true;
        else if (t == "nodes") kf.nodes = true;
        else if (t == "dim") kf.dim = true;
        else if (t == "k") kf.k = true;
        else if (t == "width") kf.width = true;
        else if (t == "fc_pre") kf.fc_pre = true;
        else throw ValidationError("unknown key field '" + tok + "'");
    }
    if (!kf.kind) throw ValidationError("key fields must include 'kind'");
    return kf;
}

std::string CostTable::make_key(const UnitSignature &sig, const std::string &cu_id,
                                const std::string &dvfs_label) const {
    std::ostringstream out;
    out << unit_kind_name(sig.kind);
    auto put_int = [&](bool on, int v, int none) {
        out << ':';
        if (!on) { out << '*'; return; }
        if (v == none) out << '-';
        else out << v;
    };
    put_int(key_fields.superblock, sig.superblock_index, -1);
    out << ':';
    if (!key_fields.op) out << '*';
    else if (sig.graph_op) out << graph_op_name(*sig.graph_op);
    else out << '-';
    put_int(key_fields.nodes, sig.nodes, 0);
    put_int(key_fields.dim, sig.dim, 0);
    put_int(key_fields.k, sig.k_neighbors, 0);
    put_int(key_fields.width, sig.ffn_width, 0);
    put_int(key_fields.fc_pre, sig.fc_pre, -1);
    out << '|' << cu_id << '|' << dvfs_label;
    return out.str();
}

void CostTable::insert(const UnitSignature &sig, const std::string &cu_id, const std::string &dvfs_label,
                       const CostRecord &rec) {
    std::string key = make_key(sig, cu_id, dvfs_label);
    rec.validate("cost entry " + key);
    auto [it, inserted] = entries_.emplace(key, rec);
    if (!inserted) throw ValidationError("duplicate cost entry for key " + key);
    row_order_.push_back(key);
}

const CostRecord *CostTable::find(const UnitSignature &sig, const std::string &cu_id,
                                  const std::string &dvfs_label) const {
    auto it = entries_.find(make_key(sig, cu_id, dvfs_label));
    return it == entries_.end() ? nullptr : &it->second;
}

const CostRecord &CostTable::at(const UnitSignature &sig, const std::string &cu_id,
                                const std::string &dvfs_label) const {
    const CostRecord *rec = find(sig, cu_id, dvfs_label);
    if (!rec)
        throw LookupError("missing cost entry for signature " + sig.canonical_key() + ", cu '" + cu_id +
                          "', dvfs '" + dvfs_label + "'");
    return *rec;
}

PlanCostView::PlanCostView(const WorkloadPlan &plan, const CostTable &table, const Platform &platform,
                           int dvfs_setting) {
    if (dvfs_setting < 0 || dvfs_setting >= static_cast<int>(platform.settings.size()))
        throw ValidationError("dvfs setting index " + std::to_string(dvfs_setting) + " out of range");
    dvfs_ = dvfs_setting;
    num_cus_ = static_cast<int>(platform.cus.size());
    const std::string &label = platform.settings[dvfs_setting].label;
    records_.resize(plan.units.size());
    feasible_.resize(plan.units.size());
    for (std::size_t i = 0; i < plan.units.size(); ++i) {
        records_[i].assign(num_cus_, nullptr);
        for (int c = 0; c < num_cus_; ++c) {
            if (!platform.cus[c].capability.supports(plan.units[i])) continue;
            records_[i][c] = &table.at(plan.units[i], platform.cus[c].id, label);
            feasible_[i].push_back(c);
        }
        if (feasible_[i].empty())
            throw InfeasibleError("no CU supports unit " + std::to_string(i) + " (" +
                                  plan.units[i].canonical_key() + ")");
    }
}

void PlanCostView::eval_totals(const std::vector<int> &assignments, double &latency, double &energy,
                               int &transitions) const {
    const std::size_t n = records_.size();
    latency = 0.0;
    energy = 0.0;
    transitions = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const CostRecord *rec = records_[i][assignments[i]];
        latency += rec->comp_latency;
        energy += rec->comp_energy;
        if (i > 0 && assignments[i - 1] != assignments[i]) {
            latency += rec->in_latency;
            energy += rec->in_energy;
            ++transitions;
        }
        if (i + 1 < n && assignments[i] != assignments[i + 1]) {
            latency += rec->out_latency;
            energy += rec->out_energy;
        }
    }
}

PerfEval PlanCostView::eval(const std::vector<int> &assignments) const {
    PerfEval out;
    eval_totals(assignments, out.total_latency, out.total_energy, out.transitions);
    return out;
}

static void check_mapping(const WorkloadPlan &plan, const MappingVector &mapping, const Platform &platform) {
    if (mapping.assignments.size() != plan.units.size())
        throw ValidationError("invalid mapping: " + std::to_string(mapping.assignments.size()) +
                              " assignments for " + std::to_string(plan.units.size()) + " plan units");
    for (std::size_t i = 0; i < mapping.assignments.size(); ++i) {
        int c = mapping.assignments[i];
        if (c < 0 || c >= static_cast<int>(platform.cus.size()))
            throw ValidationError("invalid mapping: CU index " + std::to_string(c) + " out of range at unit " +
                                  std::to_string(i));
        if (!platform.cus[c].capability.supports(plan.units[i]))
            throw ValidationError("invalid mapping: CU '" + platform.cus[c].id + "' does not support unit " +
                                  std::to_string(i) + " (" + plan.units[i].canonical_key() + ")");
    }
}

PerfEval evaluate(const WorkloadPlan &plan, const MappingVector &mapping, const CostTable &table,
                  const Platform &platform, bool with_breakdown) {
    check_mapping(plan, mapping, platform);
    if (mapping.dvfs < 0 || mapping.dvfs >= static_cast<int>(platform.settings.size()))
        throw ValidationError("invalid mapping: dvfs setting index out of range");
    const std::string &label = platform.settings[mapping.dvfs].label;
    const std::size_t n = plan.units.size();
    PerfEval out;
    if (with_breakdown) out.per_unit.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const CostRecord &rec = table.at(plan.units[i], platform.cus[mapping.assignments[i]].id, label);
        double lat = rec.comp_latency;
        double energy = rec.comp_energy;
        if (i > 0 && mapping.assignments[i - 1] != mapping.assignments[i]) {
            lat += rec.in_latency;
            energy += rec.in_energy;
            ++out.transitions;
        }
        if (i + 1 < n && mapping.assignments[i] != mapping.assignments[i + 1]) {
            lat += rec.out_latency;
            energy += rec.out_energy;
        }
        out.total_latency += lat;
        out.total_energy += energy;
        if (with_breakdown) out.per_unit.emplace_back(lat, energy);
    }
    return out;
}

PerfEval standalone_eval(const WorkloadPlan &plan, int cu_index, const CostTable &table,
                         const Platform &platform, int dvfs_setting) {
    if (cu_index < 0 || cu_index >= static_cast<int>(platform.cus.size()))
        throw ValidationError("standalone_eval: CU index out of range");
    const ComputeUnit &cu = platform.cus[cu_index];
    for (std::size_t i = 0; i < plan.units.size(); ++i)
        if (!cu.capability.supports(plan.units[i]))
            throw InfeasibleError("standalone deployment infeasible: CU '" + cu.id + "' does not support unit " +
                                  std::to_string(i) + " (" + plan.units[i].canonical_key() + ")");
    MappingVector m;
    m.assignments.assign(plan.units.size(), cu_index);
    m.dvfs = dvfs_setting;
    return evaluate(plan, m, table, platform);
}

// ---- synthetic profiles ----

static char derive_letter(const std::string &id) {
    std::size_t dash = id.rfind('-');
    char c = (dash != std::string::npos && dash + 1 < id.size()) ? id[dash + 1] : id.front();
    return static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
}

static const std::vector<UnitKind> kAllKinds = {
    UnitKind::Stem,        UnitKind::Grapher,     UnitKind::Ffn,    UnitKind::Classifier,
    UnitKind::GrapherPre,  UnitKind::GrapherAgg,  UnitKind::GrapherComb, UnitKind::GrapherPost,
    UnitKind::FfnFc1,      UnitKind::FfnFc2,
};

static std::map<UnitKind, double> default_base_lat() {
    return {{UnitKind::Stem, 0.32},        {UnitKind::Grapher, 0.75},    {UnitKind::Ffn, 0.60},
            {UnitKind::Classifier, 0.26},  {UnitKind::GrapherPre, 0.18}, {UnitKind::GrapherAgg, 0.33},
            {UnitKind::GrapherComb, 0.26}, {UnitKind::GrapherPost, 0.18}, {UnitKind::FfnFc1, 0.30},
            {UnitKind::FfnFc2, 0.30}};
}

static std::map<UnitKind, double> default_base_energy() {
    return {{UnitKind::Stem, 5.2},        {UnitKind::Grapher, 14.0},    {UnitKind::Ffn, 11.0},
            {UnitKind::Classifier, 3.0},  {UnitKind::GrapherPre, 3.2},  {UnitKind::GrapherAgg, 6.4},
            {UnitKind::GrapherComb, 5.0}, {UnitKind::GrapherPost, 3.2}, {UnitKind::FfnFc1, 5.5},
            {UnitKind::FfnFc2, 5.5}};
}

// Relative op weights follow the measured spread between EdgeConv-heavy and
// GIN-heavy backbones (Edge slowest, GIN cheapest).
static std::map<GraphOp, double> default_op_mult() {
    return {{GraphOp::MaxRelative, 1.0}, {GraphOp::EdgeConv, 1.33}, {GraphOp::GraphSage, 1.17},
            {GraphOp::Gin, 0.89}};
}

SynthSpec SynthSpec::xavier_like() {
    SynthSpec s;
    s.name = "xavier-like";
    SynthCuSpec gpu;
    gpu.id = "gpu";
    gpu.letter = 'G';
    gpu.clock_domain = "gpu";
    gpu.lat_mult = 1.0;
    gpu.energy_mult = 2.0;
    gpu.kind_lat_mult[UnitKind::Grapher] = 0.92;
    gpu.kind_lat_mult[UnitKind::GrapherAgg] = 0.90;
    SynthCuSpec dla;
    dla.id = "dla";
    dla.letter = 'D';
    dla.clock_domain = "dla";
    dla.lat_mult = 2.0;
    dla.energy_mult = 1.0;
    dla.kind_lat_mult[UnitKind::Ffn] = 0.90;
    dla.kind_lat_mult[UnitKind::FfnFc1] = 0.90;
    dla.kind_lat_mult[UnitKind::FfnFc2] = 0.90;
    dla.kind_energy_mult[UnitKind::Ffn] = 0.82;
    dla.kind_energy_mult[UnitKind::FfnFc1] = 0.82;
    dla.kind_energy_mult[UnitKind::FfnFc2] = 0.82;
    s.cus = {gpu, dla};
    s.base_lat_ms = default_base_lat();
    s.base_energy_mj = default_base_energy();
    s.op_lat_mult = default_op_mult();
    s.op_energy_mult = default_op_mult();
    s.transfer_lat_scale = 0.05;
    s.transfer_energy_scale = 0.8;
    s.domains = {{"cpu", {1728, 2265}}, {"gpu", {520, 900, 1377}}, {"emc", {1065, 2133}}, {"dla", {1050, 1395}}};
    s.transfer_domain = "emc";
    return s;
}

SynthSpec SynthSpec::maestro_3cu() {
    SynthSpec s;
    s.name = "maestro-3cu";
    SynthCuSpec d; // balanced depthwise-style dataflow, dominant standalone
    d.id = "dsa-d";
    d.lat_mult = 1.0;
    d.energy_mult = 1.0;
    SynthCuSpec y; // output-stationary, leans toward graph aggregation
    y.id = "dsa-y";
    y.lat_mult = 1.3;
    y.energy_mult = 0.72;
    y.kind_lat_mult[UnitKind::Grapher] = 0.88;
    y.kind_lat_mult[UnitKind::GrapherAgg] = 0.82;
    y.kind_energy_mult[UnitKind::Grapher] = 0.90;
    y.kind_energy_mult[UnitKind::GrapherAgg] = 0.86;
    SynthCuSpec k; // weight-stationary, weak overall but strong on dense FC work
    k.id = "dsa-k";
    k.lat_mult = 2.1;
    k.energy_mult = 1.6;
    for (UnitKind kind : {UnitKind::Ffn, UnitKind::FfnFc1, UnitKind::FfnFc2, UnitKind::GrapherComb}) {
        k.kind_lat_mult[kind] = 0.45;
        k.kind_energy_mult[kind] = 0.32;
    }
    s.cus = {d, y, k};
    s.base_lat_ms = default_base_lat();
    s.base_energy_mj = default_base_energy();
    s.op_lat_mult = default_op_mult();
    s.op_energy_mult = default_op_mult();
    s.transfer_lat_scale = 0.04;
    s.transfer_energy_scale = 0.6;
    s.domains = {{"sys", {1000}}};
    for (auto &cu : s.cus) cu.clock_domain = "sys";
    s.transfer_domain = "sys";
    return s;
}

std::vector<std::string> SynthSpec::preset_names() { return {"xavier-like", "maestro-3cu"}; }

SynthSpec SynthSpec::preset(const std::string &name) {
    std::string n = to_lower(name);
    if (n == "xavier-like") return xavier_like();
    if (n == "maestro-3cu") return maestro_3cu();
    std::string all;
    for (const auto &p : preset_names()) all += (all.empty() ? "" : ", ") + p;
    throw ValidationError("unknown profile preset '" + name + "' (available: " + all + ")");
}

void SynthSpec::validate() const {
    if (cus.empty()) throw ValidationError("synth spec '" + name + "': no CUs");
    auto positive = [&](double v, const std::string &what) {
        if (!(v > 0) || !std::isfinite(v))
            throw ValidationError("synth spec '" + name + "': " + what + " must be > 0");
    };
    for (const auto &cu : cus) {
        positive(cu.lat_mult, "lat_mult of " + cu.id);
        positive(cu.energy_mult, "energy_mult of " + cu.id);
        for (const auto &kv : cu.kind_lat_mult) positive(kv.second, "kind lat mult of " + cu.id);
        for (const auto &kv : cu.kind_energy_mult) positive(kv.second, "kind energy mult of " + cu.id);
    }
    for (UnitKind k : kAllKinds) {
        if (!base_lat_ms.count(k) || !base_energy_mj.count(k))
            throw ValidationError("synth spec '" + name + "': missing base cost for kind " +
                                  unit_kind_name(k));
        positive(base_lat_ms.at(k), std::string("base latency of ") + unit_kind_name(k));
        positive(base_energy_mj.at(k), std::string("base energy of ") + unit_kind_name(k));
    }
    positive(transfer_lat_scale, "transfer_lat_scale");
    positive(transfer_energy_scale, "transfer_energy_scale");
    if (jitter < 0 || jitter >= 0.5) throw ValidationError("synth spec jitter must be in [0, 0.5)");
    positive(dvfs_lat_exp, "dvfs_lat_exp");
    if (dvfs_energy_dyn < 0 || dvfs_energy_static < 0 || dvfs_energy_dyn + dvfs_energy_static <= 0)
        throw ValidationError("synth spec dvfs energy shares must be >= 0 and not both zero");
}

SynthSpec SynthSpec::from_ini(const Ini &ini) {
    SynthSpec s;
    std::string base = ini.get_string("synth", "base_preset", "");
    if (!base.empty()) s = preset(base);
    if (ini.has("synth", "name")) s.name = ini.require_string("synth", "name");
    s.transfer_lat_scale = ini.get_double("synth", "transfer_lat_scale", s.transfer_lat_scale);
    s.transfer_energy_scale = ini.get_double("synth", "transfer_energy_scale", s.transfer_energy_scale);
    s.jitter = ini.get_double("synth", "jitter", s.jitter);
    s.dvfs_lat_exp = ini.get_double("synth", "dvfs_lat_exp", s.dvfs_lat_exp);
    s.dvfs_energy_dyn = ini.get_double("synth", "dvfs_energy_dyn", s.dvfs_energy_dyn);
    s.dvfs_energy_static = ini.get_double("synth", "dvfs_energy_static", s.dvfs_energy_static);
    if (ini.has("synth", "cus")) {
        s.cus.clear();
        for (const auto &id : ini.get_list("synth", "cus")) {
            SynthCuSpec cu;
            cu.id = id;
            std::string sec = "synth.cu." + id;
            std::string letter = ini.get_string(sec, "letter", "");
            if (!letter.empty()) cu.letter = letter[0];
            cu.clock_domain = ini.get_string(sec, "clock_domain", "");
            cu.lat_mult = ini.get_double(sec, "lat_mult", 1.0);
            cu.energy_mult = ini.get_double(sec, "energy_mult", 1.0);
            for (const auto &kindname : ini.get_list(sec, "unsupported_kinds"))
                cu.unsupported_kinds.push_back(unit_kind_from_name(kindname));
            for (const auto &opname : ini.get_list(sec, "unsupported_ops"))
                cu.unsupported_ops.push_back(graph_op_from_name(opname));
            for (UnitKind kind : kAllKinds) {
                std::string kn = unit_kind_name(kind);
                if (ini.has(sec, "lat_mult." + kn)) cu.kind_lat_mult[kind] = ini.get_double(sec, "lat_mult." + kn, 1.0);
                if (ini.has(sec, "energy_mult." + kn))
                    cu.kind_energy_mult[kind] = ini.get_double(sec, "energy_mult." + kn, 1.0);
            }
            s.cus.push_back(cu);
        }
    }
    if (s.base_lat_ms.empty()) {
        s.base_lat_ms = default_base_lat();
        s.base_energy_mj = default_base_energy();
        s.op_lat_mult = default_op_mult();
        s.op_energy_mult = default_op_mult();
    }
    if (ini.has_section("synth.clocks")) {
        s.domains.clear();
        for (const auto &dname : ini.get_list("synth.clocks", "domains")) {
            ClockDomain d;
            d.name = dname;
            for (long long v : ini.get_int_list("synth.clocks", dname)) d.values_mhz.push_back(static_cast<int>(v));
            if (d.values_mhz.empty())
                throw ValidationError("[synth.clocks] domain '" + dname + "' has no values");
            s.domains.push_back(d);
        }
        s.transfer_domain = ini.get_string("synth.clocks", "transfer_domain", s.transfer_domain);
    }
    s.validate();
    return s;
}

static std::string setting_label(const std::vector<ClockDomain> &domains, const std::vector<int> &clocks) {
    if (domains.empty()) return "default";
    std::string out;
    for (std::size_t i = 0; i < domains.size(); ++i) {
        if (i) out += "_";
        out += domains[i].name + std::to_string(clocks[i]);
    }
    return out;
}

static std::vector<DvfsSetting> enumerate_settings(const std::vector<ClockDomain> &domains) {
    std::vector<DvfsSetting> out;
    if (domains.empty()) {
        out.push_back(DvfsSetting{"default", {}});
        return out;
    }
    std::vector<std::size_t> idx(domains.size(), 0);
    for (;;) {
        std::vector<int> clocks(domains.size());
        for (std::size_t i = 0; i < domains.size(); ++i) clocks[i] = domains[i].values_mhz[idx[i]];
        out.push_back(DvfsSetting{setting_label(domains, clocks), clocks});
        int pos = static_cast<int>(domains.size()) - 1;
        while (pos >= 0) {
            if (++idx[pos] < domains[pos].values_mhz.size()) break;
            idx[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return out;
}

Platform platform_from_synth(const SynthSpec &spec) {
    spec.validate();
    Platform p;
    p.name = spec.name;
    for (const auto &cu : spec.cus) {
        ComputeUnit c;
        c.id = cu.id;
        c.letter = cu.letter ? cu.letter : derive_letter(cu.id);
        c.clock_domain = cu.clock_domain;
        c.capability.unsupported_kinds = cu.unsupported_kinds;
        c.capability.unsupported_ops = cu.unsupported_ops;
        p.cus.push_back(c);
    }
    p.domains = spec.domains;
    p.settings = enumerate_settings(spec.domains);
    // default = every domain at its maximum (MaxN-style)
    std::vector<int> maxclocks;
    for (const auto &d : spec.domains) maxclocks.push_back(*std::max_element(d.values_mhz.begin(), d.values_mhz.end()));
    int def = p.setting_index(setting_label(spec.domains, maxclocks));
    p.default_setting = def >= 0 ? def : 0;
    p.validate();
    return p;
}

std::vector<UnitSignature> enumerate_signatures(const SpaceConfig &space) {
    space.validate();
    std::vector<UnitSignature> sigs;
    UnitSignature stem;
    stem.kind = UnitKind::Stem;
    stem.nodes = space.stage_dims.front().nodes;
    stem.dim = space.stage_dims.front().dim;
    stem.ffn_width = space.input_resolution;
    sigs.push_back(stem);
    for (int i = 0; i < space.superblock_count; ++i) {
        const StageDims &sd = space.stage_dims[i];
        auto base = [&](UnitKind kind) {
            UnitSignature u;
            u.kind = kind;
            u.superblock_index = i;
            u.nodes = sd.nodes;
            u.dim = sd.dim;
            return u;
        };
        for (GraphOp op : space.op_values) {
            for (int pre : space.fc_pre_values) {
                UnitSignature g = base(UnitKind::Grapher);
                g.graph_op = op;
                g.k_neighbors = sd.k;
                g.fc_pre = pre;
                sigs.push_back(g);
            }
        }
        for (int w : space.width_values) {
            UnitSignature f = base(UnitKind::Ffn);
            f.ffn_width = w;
            sigs.push_back(f);
        }
        sigs.push_back(base(UnitKind::GrapherPre));
        for (GraphOp op : space.op_values) {
            UnitSignature a = base(UnitKind::GrapherAgg);
            a.graph_op = op;
            a.k_neighbors = sd.k;
            sigs.push_back(a);
            UnitSignature c = base(UnitKind::GrapherComb);
            c.graph_op = op;
            sigs.push_back(c);
        }
        sigs.push_back(base(UnitKind::GrapherPost));
        for (int w : space.width_values) {
            UnitSignature f1 = base(UnitKind::FfnFc1);
            f1.ffn_width = w;
            sigs.push_back(f1);
            UnitSignature f2 = base(UnitKind::FfnFc2);
            f2.ffn_width = w;
            sigs.push_back(f2);
        }
    }
    UnitSignature cls;
    cls.kind = UnitKind::Classifier;
    cls.nodes = space.stage_dims.back().nodes;
    cls.dim = space.stage_dims.back().dim;
    cls.ffn_width = space.num_classes;
    sigs.push_back(cls);
    return sigs;
}

// Workload scale relative to the isotropic reference stage (N=196, D=320,
// K=16, W=192).
static double workload_factor(const UnitSignature &sig) {
    double nd = (sig.nodes / 196.0) * (sig.dim / 320.0);
    double kf = sig.k_neighbors > 0 ? sig.k_neighbors / 16.0 : 1.0;
    double wf = sig.ffn_width > 0 ? sig.ffn_width / 192.0 : 1.0;
    switch (sig.kind) {
    case UnitKind::Stem: return 1.2;
    case UnitKind::Classifier: return 0.35;
    case UnitKind::Grapher: return nd * (0.55 + 0.45 * kf) * (sig.fc_pre == 1 ? 1.18 : 1.0);
    case UnitKind::GrapherPre:
    case UnitKind::GrapherPost: return nd * (sig.dim / 320.0);
    case UnitKind::GrapherAgg: return nd * kf;
    case UnitKind::GrapherComb: return nd * (sig.dim / 320.0);
    case UnitKind::Ffn: return nd * wf;
    case UnitKind::FfnFc1:
    case UnitKind::FfnFc2: return nd * wf;
    }
    return 1.0;
}

struct DvfsFactors {
    double lat = 1.0;
    double energy = 1.0;
};

static DvfsFactors dvfs_factors(const SynthSpec &spec, const Platform &platform, const std::string &domain,
                                const DvfsSetting &setting) {
    DvfsFactors f;
    if (domain.empty() || platform.domains.empty()) return f;
    for (std::size_t i = 0; i < platform.domains.size(); ++i) {
        if (platform.domains[i].name != domain) continue;
        int fmax = *std::max_element(platform.domains[i].values_mhz.begin(), platform.domains[i].values_mhz.end());
        double ratio = static_cast<double>(setting.clocks_mhz[i]) / fmax;
        f.lat = std::pow(1.0 / ratio, spec.dvfs_lat_exp);
        f.energy = spec.dvfs_energy_dyn * ratio * ratio + spec.dvfs_energy_static / ratio;
        // normalize so the max-clock setting is exactly 1.0
        f.energy /= (spec.dvfs_energy_dyn + spec.dvfs_energy_static);
        return f;
    }
    throw ValidationError("synth spec references unknown clock domain '" + domain + "'");
}

CostTable synth_profile(std::uint64_t seed, const SynthSpec &spec, const SpaceConfig &space) {
    spec.validate();
    Platform platform = platform_from_synth(spec);
    std::vector<UnitSignature> sigs = enumerate_signatures(space);
    Rng rng(seed ^ fnv1a64(spec.name));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    CostTable table;
    for (const UnitSignature &sig : sigs) {
        double wf = workload_factor(sig);
        double op_l = 1.0, op_e = 1.0;
        if (sig.graph_op) {
            auto it = spec.op_lat_mult.find(*sig.graph_op);
            if (it != spec.op_lat_mult.end()) op_l = it->second;
            auto jt = spec.op_energy_mult.find(*sig.graph_op);
            if (jt != spec.op_energy_mult.end()) op_e = jt->second;
        }
        for (std::size_t c = 0; c < spec.cus.size(); ++c) {
            const SynthCuSpec &cu = spec.cus[c];
            // jitter draws happen for every (signature, CU) pair, supported or
            // not, so capability tweaks cannot shift the stream
            double jl = 1.0 + spec.jitter * unit(rng);
            double je = 1.0 + spec.jitter * unit(rng);
            double jt = 1.0 + spec.jitter * unit(rng);
            if (!platform.cus[c].capability.supports(sig)) continue;
            double kind_l = 1.0, kind_e = 1.0;
            if (auto it = cu.kind_lat_mult.find(sig.kind); it != cu.kind_lat_mult.end()) kind_l = it->second;
            if (auto it = cu.kind_energy_mult.find(sig.kind); it != cu.kind_energy_mult.end()) kind_e = it->second;
            double base_lat = spec.base_lat_ms.at(sig.kind) * wf * op_l * cu.lat_mult * kind_l * jl;
            double base_energy = spec.base_energy_mj.at(sig.kind) * wf * op_e * cu.energy_mult * kind_e * je;
            double feat = (sig.nodes / 196.0) * (sig.dim / 320.0);
            double base_tr_lat = spec.transfer_lat_scale * feat * jt;
            double base_tr_energy = spec.transfer_energy_scale * feat * jt;
            for (const DvfsSetting &setting : platform.settings) {
                DvfsFactors comp = dvfs_factors(spec, platform, cu.clock_domain, setting);
                DvfsFactors tr = dvfs_factors(spec, platform, spec.transfer_domain, setting);
                CostRecord rec;
                rec.comp_latency = base_lat * comp.lat;
                rec.comp_energy = base_energy * comp.energy;
                rec.in_latency = base_tr_lat * tr.lat;
                rec.out_latency = base_tr_lat * tr.lat;
                rec.in_energy = base_tr_energy * tr.energy;
                rec.out_energy = base_tr_energy * tr.energy;
                table.insert(sig, cu.id, setting.label, rec);
            }
        }
    }
    return table;
}

// ---- cost table file format ----

static const char *kCostHeader =
    "kind superblock op nodes dim k width fc_pre cu dvfs "
    "comp_latency comp_energy in_latency out_latency in_energy out_energy";

static std::string fmt_cost(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string cost_table_to_string(const CostTable &table) {
    std::ostringstream out;
    out << "#key_fields=" << table.key_fields.mask_string() << "\n";
    out << kCostHeader << "\n";
    for (const std::string &key : table.row_order()) {
        // key layout: kind:sb:op:nodes:dim:k:width:fc_pre|cu|dvfs
        std::string sig_part = key.substr(0, key.find('|'));
        std::string rest = key.substr(key.find('|') + 1);
        std::string cu = rest.substr(0, rest.find('|'));
        std::string dvfs = rest.substr(rest.find('|') + 1);
        for (char &ch : sig_part)
            if (ch == ':') ch = ' ';
        const CostRecord &r = table.row(key);
        out << sig_part << ' ' << cu << ' ' << dvfs << ' ' << fmt_cost(r.comp_latency) << ' '
            << fmt_cost(r.comp_energy) << ' ' << fmt_cost(r.in_latency) << ' ' << fmt_cost(r.out_latency) << ' '
            << fmt_cost(r.in_energy) << ' ' << fmt_cost(r.out_energy) << "\n";
    }
    return out.str();
}

static std::vector<std::string> split_ws(const std::string &line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

CostTable cost_table_from_string(const std::string &text, const std::string &origin, const Platform *platform) {
    CostTable table;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    auto err = [&](const std::string &msg) -> ValidationError {
        return ValidationError(origin + ":" + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            const std::string directive = "#key_fields=";
            if (t.rfind(directive, 0) == 0) table.key_fields = KeyFields::from_mask_string(t.substr(directive.size()));
            continue;
        }
        std::vector<std::string> cols = split_ws(t);
        if (!header_seen) {
            if (cols.empty() || cols[0] != "kind")
                throw err("missing header row (expected it to start with 'kind')");
            if (cols.size() != 16) throw err("header must have 16 columns, got " + std::to_string(cols.size()));
            header_seen = true;
            continue;
        }
        if (cols.size() != 16) throw err("expected 16 columns, got " + std::to_string(cols.size()));
        UnitSignature sig;
        sig.kind = unit_kind_from_name(cols[0]);
        auto parse_opt_int = [&](const std::string &tok, const char *what, int none) {
            if (tok == "-") return none;
            return static_cast<int>(parse_int(tok, what));
        };
        try {
            sig.superblock_index = parse_opt_int(cols[1], "superblock", -1);
            if (cols[2] != "-") sig.graph_op = graph_op_from_name(cols[2]);
            sig.nodes = static_cast<int>(parse_int(cols[3], "nodes"));
            sig.dim = static_cast<int>(parse_int(cols[4], "dim"));
            sig.k_neighbors = parse_opt_int(cols[5], "k", 0);
            sig.ffn_width = parse_opt_int(cols[6], "width", 0);
            sig.fc_pre = parse_opt_int(cols[7], "fc_pre", -1);
        } catch (const ValidationError &e) {
            throw err(e.what());
        }
        const std::string &cu = cols[8];
        const std::string &dvfs = cols[9];
        if (platform && platform->cu_index(cu) < 0)
            throw err("unknown CU id '" + cu + "' (platform '" + platform->name + "')");
        if (platform && platform->setting_index(dvfs) < 0)
            throw err("unknown DVFS setting '" + dvfs + "' (platform '" + platform->name + "')");
        CostRecord rec;
        double *fields[6] = {&rec.comp_latency, &rec.comp_energy, &rec.in_latency,
                             &rec.out_latency,  &rec.in_energy,   &rec.out_energy};
        for (int i = 0; i < 6; ++i) {
            try {
                *fields[i] = parse_double(cols[10 + i], "cost column " + std::to_string(11 + i));
            } catch (const ValidationError &e) {
                throw err(e.what());
            }
        }
        try {
            table.insert(sig, cu, dvfs, rec);
        } catch (const ValidationError &e) {
            throw err(e.what());
        }
    }
    if (!header_seen) throw ValidationError(origin + ": empty cost table (no header row)");
    return table;
}

CostTable load_cost_table(const std::string &path, const Platform *platform) {
    return cost_table_from_string(read_file(path), path, platform);
}

void save_cost_table(const std::string &path, const CostTable &table) {
    write_file(path, cost_table_to_string(table));
}

// ---- platform file format ----

std::string platform_to_string(const Platform &platform) {
    std::ostringstream out;
    out << "[platform]\n";
    out << "name = " << platform.name << "\n";
    out << "cus = ";
    for (std::size_t i = 0; i < platform.cus.size(); ++i) out << (i ? ", " : "") << platform.cus[i].id;
    out << "\n";
    if (!platform.settings.empty())
        out << "default_dvfs = " << platform.settings[platform.default_setting].label << "\n";
    if (platform.cycles_per_ms > 0) out << "cycles_per_ms = " << fmt_cost(platform.cycles_per_ms) << "\n";
    for (const auto &cu : platform.cus) {
        out << "\n[cu." << cu.id << "]\n";
        out << "letter = " << cu.letter << "\n";
        if (!cu.clock_domain.empty()) out << "clock_domain = " << cu.clock_domain << "\n";
        if (!cu.capability.unsupported_kinds.empty()) {
            out << "unsupported_kinds = ";
            for (std::size_t i = 0; i < cu.capability.unsupported_kinds.size(); ++i)
                out << (i ? ", " : "") << unit_kind_name(cu.capability.unsupported_kinds[i]);
            out << "\n";
        }
        if (!cu.capability.unsupported_ops.empty()) {
            out << "unsupported_ops = ";
            for (std::size_t i = 0; i < cu.capability.unsupported_ops.size(); ++i)
                out << (i ? ", " : "") << graph_op_name(cu.capability.unsupported_ops[i]);
            out << "\n";
        }
    }
    if (!platform.domains.empty()) {
        out << "\n[clocks]\n";
        out << "domains = ";
        for (std::size_t i = 0; i < platform.domains.size(); ++i) out << (i ? ", " : "") << platform.domains[i].name;
        out << "\n";
        for (const auto &d : platform.domains) {
            out << d.name << " = ";
            for (std::size_t i = 0; i < d.values_mhz.size(); ++i) out << (i ? ", " : "") << d.values_mhz[i];
            out << "\n";
        }
    } else {
        // no clock domains: persist the literal setting labels
        out << "\n[dvfs]\n";
        out << "settings = ";
        for (std::size_t i = 0; i < platform.settings.size(); ++i)
            out << (i ? ", " : "") << platform.settings[i].label;
        out << "\n";
    }
    return out.str();
}

Platform platform_from_ini(const Ini &ini) {
    Platform p;
    p.name = ini.get_string("platform", "name", "unnamed");
    p.cycles_per_ms = ini.get_double("platform", "cycles_per_ms", 0.0);
    std::vector<std::string> cu_ids = ini.get_list("platform", "cus");
    if (cu_ids.empty()) throw ValidationError(ini.origin() + ": [platform] cus list is empty");
    for (const auto &id : cu_ids) {
        ComputeUnit cu;
        cu.id = id;
        std::string sec = "cu." + id;
        std::string letter = ini.get_string(sec, "letter", "");
        cu.letter = letter.empty() ? derive_letter(id) : letter[0];
        cu.clock_domain = ini.get_string(sec, "clock_domain", "");
        for (const auto &kindname : ini.get_list(sec, "unsupported_kinds"))
            cu.capability.unsupported_kinds.push_back(unit_kind_from_name(kindname));
        for (const auto &opname : ini.get_list(sec, "unsupported_ops"))
            cu.capability.unsupported_ops.push_back(graph_op_from_name(opname));
        p.cus.push_back(cu);
    }
    if (ini.has_section("clocks")) {
        for (const auto &dname : ini.get_list("clocks", "domains")) {
            ClockDomain d;
            d.name = dname;
            for (long long v : ini.get_int_list("clocks", dname)) d.values_mhz.push_back(static_cast<int>(v));
            if (d.values_mhz.empty())
                throw ValidationError(ini.origin() + ": [clocks] domain '" + dname + "' has no values");
            p.domains.push_back(d);
        }
        p.settings = enumerate_settings(p.domains);
    } else if (ini.has_section("dvfs")) {
        for (const auto &label : ini.get_list("dvfs", "settings")) p.settings.push_back(DvfsSetting{label, {}});
        if (p.settings.empty()) throw ValidationError(ini.origin() + ": [dvfs] settings list is empty");
    } else {
        p.settings.push_back(DvfsSetting{"default", {}});
    }
    std::string def = ini.get_string("platform", "default_dvfs", "");
    if (!def.empty()) {
        int idx = p.setting_index(def);
        if (idx < 0) throw ValidationError(ini.origin() + ": default_dvfs '" + def + "' is not a known setting");
        p.default_setting = idx;
    } else if (!p.domains.empty()) {
        std::vector<int> maxclocks;
        for (const auto &d : p.domains)
            maxclocks.push_back(*std::max_element(d.values_mhz.begin(), d.values_mhz.end()));
        int idx = p.setting_index(setting_label(p.domains, maxclocks));
        p.default_setting = idx >= 0 ? idx : 0;
    }
    p.validate();
    return p;
}

Platform load_platform(const std::string &path) { return platform_from_ini(Ini::parse_file(path)); }

void save_platform(const std::string &path, const Platform &platform) {
    write_file(path, platform_to_string(platform));
}

std::vector<std::string> missing_cost_entries(const CostTable &table, const Platform &platform,
                                              const std::vector<UnitSignature> &signatures) {
    std::vector<std::string> missing;
    for (const UnitSignature &sig : signatures) {
        for (const auto &cu : platform.cus) {
            if (!cu.capability.supports(sig)) continue;
            for (const auto &setting : platform.settings) {
                if (!table.find(sig, cu.id, setting.label))
                    missing.push_back(sig.canonical_key() + " | " + cu.id + " | " + setting.label);
            }
        }
    }
    return missing;
}

std::string mapping_to_string(const WorkloadPlan &plan, const std::vector<int> &assignments,
                              const Platform &platform) {
    if (assignments.size() != plan.units.size())
        throw ValidationError("mapping_to_string: assignment count mismatch");
    // letters grouped per kind, plan order within each group (Table-3 style)
    std::vector<std::string> groups(kUnitKindCount);
    for (std::size_t i = 0; i < plan.units.size(); ++i) {
        int kind = static_cast<int>(plan.units[i].kind);
        groups[kind].push_back(platform.cus[assignments[i]].letter);
    }
    static const UnitKind order[] = {UnitKind::Stem,        UnitKind::Grapher,     UnitKind::GrapherPre,
                                     UnitKind::GrapherAgg,  UnitKind::GrapherComb, UnitKind::GrapherPost,
                                     UnitKind::Ffn,         UnitKind::FfnFc1,      UnitKind::FfnFc2,
                                     UnitKind::Classifier};
    std::string out;
    for (UnitKind k : order) {
        const std::string &g = groups[static_cast<int>(k)];
        if (g.empty()) continue;
        if (!out.empty()) out += "-";
        out += g;
    }
    return out;
}

std::vector<double> cu_utilization(const std::vector<int> &assignments, int num_cus) {
    std::vector<double> out(num_cus, 0.0);
    if (assignments.empty()) return out;
    for (int c : assignments) out.at(c) += 1.0;
    for (double &v : out) v /= static_cast<double>(assignments.size());
    return out;
}

} // namespace archmap
