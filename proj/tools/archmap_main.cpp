#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>

#include "archmap/analysis.hpp"
#include "archmap/archspace.hpp"
#include "archmap/config.hpp"
#include "archmap/hwmodel.hpp"
#include "archmap/ioe.hpp"
#include "archmap/ooe.hpp"
#include "archmap/reports.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char *kVersion = "0.1.0";

std::string resolve_config_path(const std::string &path) {
    if (fs::exists(path)) return path;
    const char *dir = std::getenv("ARCHMAP_CONFIG_DIR");
    if (dir && !fs::path(path).is_absolute()) {
        fs::path candidate = fs::path(dir) / path;
        if (fs::exists(candidate)) return candidate.string();
    }
    throw archmap::ValidationError("config file not found: " + path);
}

std::string iso_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

struct Setup {
    archmap::Ini ini;
    std::uint64_t config_hash = 0;
    std::string config_path;
    archmap::SpaceConfig space;
    archmap::Platform platform;
    archmap::CostTable table;
    archmap::OoeConfig ooe;
    archmap::AccuracyModel acc = archmap::AccuracyModel::surrogate();
};

Setup load_setup(const std::string &config_arg) {
    Setup s;
    s.config_path = resolve_config_path(config_arg);
    std::string content = archmap::read_file(s.config_path);
    s.config_hash = archmap::fnv1a64(content);
    s.ini = archmap::Ini::parse_string(content, s.config_path);
    s.space = s.ini.has_section("archspace") ? archmap::SpaceConfig::from_ini(s.ini)
                                             : archmap::SpaceConfig::defaults();

    fs::path base = fs::path(s.config_path).parent_path();
    auto resolve = [&](const std::string &p) {
        fs::path fp(p);
        if (fp.is_absolute() || fs::exists(fp)) return fp.string();
        return (base / fp).string();
    };

    std::string preset = s.ini.get_string("platform", "preset", "");
    std::string spec_file = s.ini.get_string("platform", "spec_file", "");
    std::string platform_file = s.ini.get_string("platform", "platform_file", "");
    if (!preset.empty() || !spec_file.empty()) {
        archmap::SynthSpec spec = !preset.empty()
                                      ? archmap::SynthSpec::preset(preset)
                                      : archmap::SynthSpec::from_ini(archmap::Ini::parse_file(resolve(spec_file)));
        auto profile_seed = static_cast<std::uint64_t>(s.ini.get_int("platform", "profile_seed", 0));
        s.platform = archmap::platform_from_synth(spec);
        s.table = archmap::synth_profile(profile_seed, spec, s.space);
    } else if (!platform_file.empty()) {
        s.platform = archmap::load_platform(resolve(platform_file));
        std::string table_file = s.ini.require_string("platform", "table_file");
        s.table = archmap::load_cost_table(resolve(table_file), &s.platform);
    } else {
        throw archmap::ValidationError(s.config_path +
                                       ": [platform] needs either preset=, spec_file=, or platform_file=/table_file=");
    }

    s.ooe = archmap::OoeConfig::from_ini(s.ini);

    std::string acc = s.ini.get_string("ooe", "acc_model", "surrogate");
    if (acc == "surrogate") {
        s.acc = archmap::AccuracyModel::surrogate();
    } else if (acc.rfind("table:", 0) == 0) {
        s.acc = archmap::AccuracyModel::load_table(resolve(acc.substr(6)));
    } else {
        throw archmap::ValidationError("[ooe] acc_model must be 'surrogate' or 'table:<path>'");
    }
    return s;
}

void apply_constraint_flags(archmap::IoeConfig &cfg, const std::vector<std::string> &flags) {
    for (const auto &flag : flags) {
        std::size_t eq = flag.find('=');
        if (eq == std::string::npos)
            throw archmap::ValidationError("--constraint expects key=value, got '" + flag + "'");
        std::string key = archmap::to_lower(archmap::trim(flag.substr(0, eq)));
        double value = archmap::parse_double(archmap::trim(flag.substr(eq + 1)), "--constraint " + key);
        if (key == "latency") cfg.constraints.latency_ms = value;
        else if (key == "energy") cfg.constraints.energy_mj = value;
        else if (key == "power") cfg.constraints.power_mw = value;
        else if (key == "latency-increase") cfg.constraints.latency_increase = value;
        else
            throw archmap::ValidationError("--constraint key must be latency|energy|power|latency-increase, got '" +
                                           key + "'");
    }
}

void write_output(const fs::path &path, const std::string &content, bool force) {
    if (fs::exists(path) && !force)
        throw archmap::ValidationError("refusing to overwrite " + path.string() + " (pass --force)");
    archmap::write_file(path.string(), content);
}

void write_manifest(const fs::path &out_dir, const std::string &command, const Setup &s, std::uint64_t seed,
                    int threads, const std::vector<std::string> &outputs, bool force) {
    json m;
    m["tool"] = "archmap";
    m["version"] = kVersion;
    m["command"] = command;
    m["config"] = s.config_path;
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx", static_cast<unsigned long long>(s.config_hash));
    m["config_hash"] = hash_hex;
    m["seed"] = seed;
    m["threads"] = threads;
    m["run_id"] = archmap::run_id(s.config_hash, seed);
    m["created_utc"] = iso_now();
    m["outputs"] = outputs;
    write_output(out_dir / "manifest.json", m.dump(2) + "\n", force);
}

fs::path prep_outdir(const std::string &out) {
    fs::path dir(out);
    fs::create_directories(dir);
    return dir;
}

int cmd_gen_profile(const std::string &preset, const std::string &spec_file, const std::string &config_arg,
                    std::uint64_t seed, const std::string &out, bool force) {
    archmap::SpaceConfig space = archmap::SpaceConfig::defaults();
    if (!config_arg.empty()) {
        archmap::Ini ini = archmap::Ini::parse_file(resolve_config_path(config_arg));
        if (ini.has_section("archspace")) space = archmap::SpaceConfig::from_ini(ini);
    }
    archmap::SynthSpec spec;
    if (!spec_file.empty()) spec = archmap::SynthSpec::from_ini(archmap::Ini::parse_file(spec_file));
    else if (!preset.empty()) spec = archmap::SynthSpec::preset(preset);
    else throw archmap::ValidationError("gen-profile needs --preset or --spec");

    archmap::Platform platform = archmap::platform_from_synth(spec);
    archmap::CostTable table = archmap::synth_profile(seed, spec, space);
    fs::path dir = prep_outdir(out);
    fs::path pfile = dir / (spec.name + ".platform");
    fs::path cfile = dir / (spec.name + ".costs");
    write_output(pfile, archmap::platform_to_string(platform), force);
    write_output(cfile, archmap::cost_table_to_string(table), force);
    std::cout << "wrote " << pfile.string() << "\n";
    std::cout << "wrote " << cfile.string() << " (" << table.size() << " entries, " << platform.cus.size()
              << " CUs, " << platform.settings.size() << " DVFS settings)\n";
    return 0;
}

int cmd_search(const std::string &config_arg, std::uint64_t seed, const std::string &out, int threads,
               const std::vector<std::string> &constraints, bool force) {
    Setup s = load_setup(config_arg);
    apply_constraint_flags(s.ooe.ioe, constraints);
    s.ooe.threads = threads;
    archmap::CoSearchResult result = archmap::co_search(s.space, s.platform, s.table, s.acc, s.ooe, seed);
    std::string run = archmap::run_id(s.config_hash, seed);
    fs::path dir = prep_outdir(out);
    write_output(dir / "pareto.tsv", archmap::co_search_records(result, s.platform, s.space, run), force);
    write_output(dir / "hv_trace.tsv", archmap::hv_trace_records(result, run), force);
    write_output(dir / "composition.tsv", archmap::composition_records(result, s.platform, run), force);
    write_manifest(dir, "search", s, seed, threads, {"pareto.tsv", "hv_trace.tsv", "composition.tsv"}, force);
    std::cout << "search finished: " << result.pareto.size() << " archive members, " << result.genomes_evaluated
              << " genomes, " << result.eval_count << " plan evaluations\n";
    std::cout << "results in " << dir.string() << "\n";
    return 0;
}

int cmd_map(const std::string &config_arg, const std::string &genome_str, std::uint64_t seed,
            const std::string &out, int threads, const std::vector<std::string> &constraints, bool force) {
    Setup s = load_setup(config_arg);
    apply_constraint_flags(s.ooe.ioe, constraints);
    archmap::ArchitectureGenome genome = archmap::parse_genome_string(genome_str, s.space.backbone);
    archmap::WorkloadPlan plan = archmap::expand_architecture(genome, s.space.granularity, s.space);
    archmap::IoeConfig cfg = s.ooe.ioe;
    cfg.threads = threads;
    archmap::IoeResult result = archmap::search_mappings(plan, s.table, s.platform, cfg, seed);
    std::string run = archmap::run_id(s.config_hash, seed);
    fs::path dir = prep_outdir(out);
    write_output(dir / "ioe_pareto.tsv",
                 archmap::ioe_records(result, plan, s.platform, cfg.gamma1, cfg.gamma2, run), force);
    write_manifest(dir, "map", s, seed, threads, {"ioe_pareto.tsv"}, force);
    std::cout << "best mapping: " << archmap::mapping_to_string(plan, result.best_mapping.assignments, s.platform)
              << "\n";
    std::cout << "latency " << archmap::fmt_fixed(result.best_eval.total_latency, 4) << " ms, energy "
              << archmap::fmt_fixed(result.best_eval.total_energy, 4) << " mJ, fitness "
              << archmap::fmt_fixed(result.best_fitness, 6) << (result.feasible ? "" : " (constraints infeasible)")
              << "\n";
    if (!result.feasible) return 3;
    return 0;
}

int cmd_oracle(const std::string &config_arg, const std::string &genome_str, const std::string &out,
               std::uint64_t budget, const std::vector<std::string> &constraints, bool force) {
    Setup s = load_setup(config_arg);
    apply_constraint_flags(s.ooe.ioe, constraints);
    archmap::ArchitectureGenome genome = archmap::parse_genome_string(genome_str, s.space.backbone);
    archmap::WorkloadPlan plan = archmap::expand_architecture(genome, s.space.granularity, s.space);
    archmap::OracleResult result =
        archmap::brute_force_oracle(plan, s.table, s.platform, s.ooe.ioe, archmap::BigCount(budget));
    archmap::StandaloneRefs refs =
        archmap::standalone_refs(plan, s.table, s.platform, s.platform.default_setting);
    std::string run = archmap::run_id(s.config_hash, 0);
    fs::path dir = prep_outdir(out);
    write_output(dir / "oracle_front.tsv",
                 archmap::oracle_records(result, plan, s.platform, refs, s.ooe.ioe.gamma1, s.ooe.ioe.gamma2, run),
                 force);
    write_manifest(dir, "oracle", s, 0, 1, {"oracle_front.tsv"}, force);
    std::cout << "enumerated " << archmap::big_to_string(result.enumerated) << " mappings, front size "
              << result.pareto.size() << "\n";
    if (!result.feasible) return 3;
    return 0;
}

std::string prettify_mapping_cells(const std::string &records) {
    std::istringstream in(records);
    std::ostringstream out;
    std::string line;
    int mapping_col = -1;
    bool header_done = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            out << line << "\n";
            continue;
        }
        std::vector<std::string> cells;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            std::size_t tab = line.find('\t', pos);
            if (tab == std::string::npos) tab = line.size();
            cells.push_back(line.substr(pos, tab - pos));
            if (tab == line.size()) break;
            pos = tab + 1;
        }
        if (!header_done) {
            for (std::size_t i = 0; i < cells.size(); ++i)
                if (cells[i] == "mapping") mapping_col = static_cast<int>(i);
            header_done = true;
        } else if (mapping_col >= 0 && mapping_col < static_cast<int>(cells.size())) {
            std::string pretty;
            for (char c : cells[mapping_col]) {
                if (c == '-') pretty += " | ";
                else {
                    if (!pretty.empty() && pretty.back() != ' ') pretty += '-';
                    pretty += c;
                }
            }
            cells[mapping_col] = pretty;
        }
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "\t" : "") << cells[i];
        out << "\n";
    }
    return out.str();
}

int cmd_report(const std::string &run_dir) {
    fs::path dir(run_dir);
    if (!fs::exists(dir)) throw archmap::ValidationError("run directory not found: " + run_dir);
    fs::path manifest = dir / "manifest.json";
    if (fs::exists(manifest)) {
        json m = json::parse(archmap::read_file(manifest.string()));
        std::cout << "run " << m.value("run_id", "?") << "  command=" << m.value("command", "?")
                  << "  seed=" << m.value("seed", 0) << "  config=" << m.value("config", "?") << "\n\n";
    }
    bool any = false;
    for (const char *name : {"pareto.tsv", "ioe_pareto.tsv", "oracle_front.tsv", "hv_trace.tsv",
                             "composition.tsv"}) {
        fs::path f = dir / name;
        if (!fs::exists(f)) continue;
        any = true;
        std::cout << "== " << name << " ==\n";
        std::string records = archmap::read_file(f.string());
        std::cout << archmap::render_table(prettify_mapping_cells(records), 64) << "\n";
    }
    if (!any) throw archmap::ValidationError("no result records found in " + run_dir);
    return 0;
}

int cmd_validate(const std::string &config_arg) {
    Setup s = load_setup(config_arg);
    s.space.validate();
    s.platform.validate();
    s.ooe.validate();
    std::vector<archmap::UnitSignature> sigs = archmap::enumerate_signatures(s.space);
    std::vector<std::string> missing = archmap::missing_cost_entries(s.table, s.platform, sigs);
    if (!missing.empty()) {
        std::ostringstream msg;
        msg << "cost table is missing " << missing.size() << " (unit, CU, DVFS) entries:";
        std::size_t shown = std::min<std::size_t>(missing.size(), 20);
        for (std::size_t i = 0; i < shown; ++i) msg << "\n  " << missing[i];
        if (missing.size() > shown) msg << "\n  ... and " << (missing.size() - shown) << " more";
        throw archmap::ValidationError(msg.str());
    }
    std::cout << "validation ok: " << sigs.size() << " signatures x " << s.platform.cus.size() << " CUs x "
              << s.platform.settings.size() << " DVFS settings covered (" << s.table.size() << " table entries)\n";
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"architecture/mapping co-search over modeled heterogeneous SoCs"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string config, out = "run", genome, preset, spec_file, run_dir;
    std::uint64_t seed = 0, budget = 1ull << 24;
    int threads = 1;
    bool force = false;
    std::vector<std::string> constraints;

    auto *gen = app.add_subcommand("gen-profile", "generate a synthetic platform + cost-table profile");
    gen->add_option("--preset", preset, "profile preset (xavier-like, maestro-3cu)");
    gen->add_option("--spec", spec_file, "custom synth spec file");
    gen->add_option("--config", config, "config providing the [archspace] signature universe");
    gen->add_option("--seed", seed, "profile seed");
    gen->add_option("--out", out, "output directory")->required();
    gen->add_flag("--force", force, "overwrite existing files");

    auto *search = app.add_subcommand("search", "run the nested architecture/mapping co-search");
    search->add_option("--config", config)->required();
    search->add_option("--seed", seed);
    search->add_option("--out", out)->required();
    search->add_option("--threads", threads);
    search->add_option("--constraint", constraints, "latency|energy|power|latency-increase=value");
    search->add_flag("--force", force);

    auto *map = app.add_subcommand("map", "search mappings for one architecture");
    map->add_option("--config", config)->required();
    map->add_option("--genome", genome, "e.g. ops=G-M-G-G;d=4,4,4,4;ffn=1,0,1,1;pre=0,0,0,0;w=192,192,96,320")
        ->required();
    map->add_option("--seed", seed);
    map->add_option("--out", out)->required();
    map->add_option("--threads", threads);
    map->add_option("--constraint", constraints);
    map->add_flag("--force", force);

    auto *oracle = app.add_subcommand("oracle", "exact Pareto front by brute-force enumeration");
    oracle->add_option("--config", config)->required();
    oracle->add_option("--genome", genome)->required();
    oracle->add_option("--out", out)->required();
    oracle->add_option("--budget", budget, "max feasible mappings to enumerate");
    oracle->add_option("--constraint", constraints);
    oracle->add_flag("--force", force);

    auto *report = app.add_subcommand("report", "summarize a finished run directory");
    report->add_option("--run", run_dir)->required();

    auto *validate = app.add_subcommand("validate", "validate config, platform, and cost-table coverage");
    validate->add_option("--config", config)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen_profile(preset, spec_file, config, seed, out, force);
        if (search->parsed()) return cmd_search(config, seed, out, threads, constraints, force);
        if (map->parsed()) return cmd_map(config, genome, seed, out, threads, constraints, force);
        if (oracle->parsed()) return cmd_oracle(config, genome, out, budget, constraints, force);
        if (report->parsed()) return cmd_report(run_dir);
        if (validate->parsed()) return cmd_validate(config);
    } catch (const archmap::BudgetError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const archmap::InfeasibleError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const archmap::ValidationError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const archmap::LookupError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
