#include "archmap/reports.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace archmap {

std::string run_id(std::uint64_t config_hash, std::uint64_t seed) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%016llx-%llu", static_cast<unsigned long long>(config_hash),
                  static_cast<unsigned long long>(seed));
    return buf;
}

std::string co_search_records(const CoSearchResult &result, const Platform &platform, const SpaceConfig &space,
                              const std::string &run) {
    std::ostringstream out;
    out << "# run_id = " << run << "\n";
    out << "# evaluations = " << result.eval_count << " (genome, mapping) plan evaluations, "
        << result.genomes_evaluated << " distinct genomes\n";
    out << "genome\tops\tffn_use_pct\tfc_pre_pct\taccuracy\tlatency_ms\tenergy_mj\ttransitions\tmapping\tbest_map";
    for (const auto &cu : platform.cus) out << "\tuse_" << cu.id << "_pct";
    out << "\tmap_fitness\tdvfs\n";
    for (const auto &m : result.pareto) {
        WorkloadPlan plan = expand_architecture(m.genome, space.granularity, space);
        out << genome_to_string(m.genome) << '\t' << m.genome.ops_summary() << '\t'
            << fmt_fixed(m.genome.ffn_use_pct(), 1) << '\t' << fmt_fixed(m.genome.fc_pre_pct(), 1) << '\t'
            << fmt_fixed(m.accuracy, 4) << '\t' << fmt_fixed(m.eval.total_latency, 6) << '\t'
            << fmt_fixed(m.eval.total_energy, 6) << '\t' << m.eval.transitions << '\t'
            << mapping_to_string(plan, m.mapping.assignments, platform) << '\t' << (m.best_mapping ? 1 : 0);
        std::vector<double> use = cu_utilization(m.mapping.assignments, static_cast<int>(platform.cus.size()));
        for (double u : use) out << '\t' << fmt_fixed(100.0 * u, 2);
        out << '\t' << fmt_fixed(m.mapping_fitness, 6) << '\t'
            << platform.settings.at(static_cast<std::size_t>(m.mapping.dvfs)).label << "\n";
    }
    return out.str();
}

std::string hv_trace_records(const CoSearchResult &result, const std::string &run) {
    double worst_lat = 0.0, worst_energy = 0.0;
    for (const auto &snap : result.history) {
        for (const auto &p : snap.archive_points) {
            worst_lat = std::max(worst_lat, p[1]);
            worst_energy = std::max(worst_energy, p[2]);
        }
    }
    ObjectiveVector ref({0.0, 1.1 * worst_lat, 1.1 * worst_energy},
                        {Sense::Maximize, Sense::Minimize, Sense::Minimize});
    std::ostringstream out;
    out << "# run_id = " << run << "\n";
    out << "# reference = acc 0, latency " << fmt_fixed(ref.values[1], 6) << ", energy "
        << fmt_fixed(ref.values[2], 6) << "\n";
    out << "generation\tarchive_size\thypervolume\n";
    for (const auto &snap : result.history) {
        std::vector<ObjectiveVector> pts;
        pts.reserve(snap.archive_points.size());
        for (const auto &p : snap.archive_points)
            pts.push_back(ObjectiveVector({p[0], p[1], p[2]}, {Sense::Maximize, Sense::Minimize, Sense::Minimize}));
        double hv = (worst_lat > 0 && worst_energy > 0) ? hypervolume_clipped(pts, ref) : 0.0;
        out << snap.generation << '\t' << snap.archive_points.size() << '\t' << fmt_fixed(hv, 6) << "\n";
    }
    return out.str();
}

std::string composition_records(const CoSearchResult &result, const Platform &platform, const std::string &run) {
    std::vector<std::string> classes;
    classes.reserve(result.pareto.size());
    for (const auto &m : result.pareto) classes.push_back(mapping_class(m.mapping.assignments, platform));
    std::vector<CompositionEntry> entries = pareto_composition(classes);
    std::ostringstream out;
    out << "# run_id = " << run << "\n";
    out << "class\tcount\tshare_pct\n";
    for (const auto &e : entries) out << e.label << '\t' << e.count << '\t' << fmt_fixed(e.pct, 2) << "\n";
    return out.str();
}

std::string ioe_records(const IoeResult &result, const WorkloadPlan &plan, const Platform &platform,
                        double gamma1, double gamma2, const std::string &run) {
    std::ostringstream out;
    out << "# run_id = " << run << "\n";
    out << "# feasible = " << (result.feasible ? "true" : "false") << "\n";
    out << "# dvfs = " << result.dvfs_label << "\n";
    out << "# evaluations = " << result.evaluations << (result.exhaustive ? " (exhaustive)" : "") << "\n";
    for (const auto &ref : result.normalization.per_cu) {
        out << "# standalone " << platform.cus.at(static_cast<std::size_t>(ref.cu)).id << " = "
            << fmt_fixed(ref.eval.total_latency, 6) << " ms, " << fmt_fixed(ref.eval.total_energy, 6) << " mJ\n";
    }
    out << "# best = " << mapping_to_string(plan, result.best_mapping.assignments, platform) << " ("
        << fmt_fixed(result.best_eval.total_latency, 6) << " ms, " << fmt_fixed(result.best_eval.total_energy, 6)
        << " mJ, fitness " << fmt_fixed(result.best_fitness, 6) << ")\n";
    out << "mapping\tlatency_ms\tenergy_mj\ttransitions\tfitness\n";
    for (const auto &c : result.pareto) {
        PerfEval ev{c.latency, c.energy, c.transitions, {}};
        out << mapping_to_string(plan, c.assignments, platform) << '\t' << fmt_fixed(c.latency, 6) << '\t'
            << fmt_fixed(c.energy, 6) << '\t' << c.transitions << '\t'
            << fmt_fixed(ioe_fitness(ev, result.normalization, gamma1, gamma2), 6) << "\n";
    }
    return out.str();
}

std::string oracle_records(const OracleResult &result, const WorkloadPlan &plan, const Platform &platform,
                           const StandaloneRefs &refs, double gamma1, double gamma2, const std::string &run) {
    std::ostringstream out;
    out << "# run_id = " << run << "\n";
    out << "# enumerated = " << big_to_string(result.enumerated) << "\n";
    out << "# feasible = " << (result.feasible ? "true" : "false") << "\n";
    if (result.feasible)
        out << "# best = " << mapping_to_string(plan, result.best_mapping.assignments, platform) << " ("
            << fmt_fixed(result.best_eval.total_latency, 6) << " ms, "
            << fmt_fixed(result.best_eval.total_energy, 6) << " mJ, fitness "
            << fmt_fixed(result.best_fitness, 6) << ")\n";
    out << "mapping\tlatency_ms\tenergy_mj\ttransitions\tfitness\n";
    for (const auto &c : result.pareto) {
        PerfEval ev{c.latency, c.energy, c.transitions, {}};
        out << mapping_to_string(plan, c.assignments, platform) << '\t' << fmt_fixed(c.latency, 6) << '\t'
            << fmt_fixed(c.energy, 6) << '\t' << c.transitions << '\t'
            << fmt_fixed(ioe_fitness(ev, refs, gamma1, gamma2), 6) << "\n";
    }
    return out.str();
}

std::string render_table(const std::string &records, std::size_t max_col_width) {
    std::istringstream in(records);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> comments;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            comments.push_back(line);
            continue;
        }
        std::vector<std::string> cells;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            std::size_t tab = line.find('\t', pos);
            if (tab == std::string::npos) tab = line.size();
            std::string cell = line.substr(pos, tab - pos);
            if (cell.size() > max_col_width) cell = cell.substr(0, max_col_width - 3) + "...";
            cells.push_back(cell);
            if (tab == line.size()) break;
            pos = tab + 1;
        }
        rows.push_back(std::move(cells));
    }
    std::vector<std::size_t> widths;
    for (const auto &row : rows) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
    }
    std::ostringstream out;
    for (const auto &c : comments) out << c << "\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t i = 0; i < rows[r].size(); ++i) {
            if (i) out << "  ";
            out << rows[r][i];
            for (std::size_t pad = rows[r][i].size(); pad < widths[i]; ++pad) out << ' ';
        }
        out << "\n";
        if (r == 0) {
            std::size_t total = 0;
            for (std::size_t i = 0; i < widths.size(); ++i) total += widths[i] + (i ? 2 : 0);
            out << std::string(total, '-') << "\n";
        }
    }
    return out.str();
}

} // namespace archmap
