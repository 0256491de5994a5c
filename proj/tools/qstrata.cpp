// qstrata: equisingular strata of simple quartic surfaces.
//
//   qstrata classify --singularities "2A7+A3+A1" [--format json|csv|table]
//   qstrata classify-all --mu-max 12 [--jobs N] [--cache-dir DIR] [--extremal]

#include <CLI11.hpp>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "qlat/pipeline.hpp"

using namespace qlat;
using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

json to_json(const StratumRecord& r) {
    json j;
    j["singularities"] = r.singularities();
    j["mu"] = r.mu();
    j["kernel"] = r.kernel_codes();
    j["r"] = r.r;
    j["c"] = r.c;
    j["extremal"] = r.extremal;
    if (r.error) j["error"] = *r.error;
    if (r.diagnostics) {
        const auto& d = *r.diagnostics;
        json dj;
        dj["primes"] = d.primes;
        dj["sigma_sharp"] = d.sigma_sharp;
        dj["e_order"] = d.e_order;
        dj["e_plus_order"] = d.e_plus_order;
        dj["generator_images"] = d.images;
        j["diagnostics"] = dj;
    }
    return j;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return out + "\"";
}

void write_records(std::ostream& os, const std::vector<StratumRecord>& recs, const std::string& format) {
    if (format == "json") {
        json arr = json::array();
        for (const auto& r : recs) arr.push_back(to_json(r));
        os << arr.dump(1) << "\n";
    } else if (format == "csv") {
        os << "singularities,mu,kernel,r,c,extremal,error\n";
        for (const auto& r : recs)
            os << csv_field(r.singularities()) << "," << r.mu() << "," << csv_field(join(r.kernel_codes(), "; ")) << ","
               << r.r << "," << r.c << "," << (r.extremal ? "true" : "false") << "," << csv_field(r.error.value_or(""))
               << "\n";
    } else {
        os << std::left << std::setw(28) << "singularities" << std::setw(4) << "mu" << std::setw(8) << "(r,c)"
           << "kernel\n";
        for (const auto& r : recs) {
            std::ostringstream rc;
            rc << "(" << r.r << "," << r.c << ")";
            os << std::left << std::setw(28) << r.singularities() << std::setw(4) << r.mu() << std::setw(8)
               << (r.error ? "error" : rc.str()) << (r.kernel.empty() ? "0" : join(r.kernel_codes(), "; "))
               << (r.extremal ? "  extremal" : "") << (r.error ? "  " + *r.error : "") << "\n";
        }
    }
}

void write_statistics(std::ostream& os, const std::vector<MuStatistics>& stats, bool extremal) {
    os << std::left << std::setw(4) << "mu";
    for (const auto& s : stats) os << std::right << std::setw(6) << s.mu;
    os << std::right << std::setw(8) << "total"
       << "\n";
    auto row = [&](const char* name, auto get) {
        os << std::left << std::setw(4) << name;
        int total = 0;
        for (const auto& s : stats) {
            os << std::right << std::setw(6) << get(s);
            total += get(s);
        }
        os << std::right << std::setw(8) << total << "\n";
    };
    row("ss", [](const MuStatistics& s) { return s.sets; });
    row("cf", [](const MuStatistics& s) { return s.configurations; });
    row("r", [](const MuStatistics& s) { return s.real; });
    row("c", [](const MuStatistics& s) { return s.pairs; });
    if (extremal) row("ex", [](const MuStatistics& s) { return s.extremal; });
    row("err", [](const MuStatistics& s) { return s.errors; });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Equisingular strata of simple quartic surfaces"};
    app.require_subcommand(1);
    std::string format = "table", cache_dir, singularities;
    int jobs = 1, mu_max = 19;
    bool diagnostics = false, extremal = false;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "table"}));
        cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
        cmd->add_option("--cache-dir", cache_dir, "Directory for persistent per-configuration results");
        cmd->add_flag("--emit-diagnostics", diagnostics, "Include Miranda-Morrison data per configuration");
        cmd->add_flag("--extremal", extremal, "Compute the perturbation poset and mark extremal families");
    };
    auto* one = app.add_subcommand("classify", "Classify the strata of one set of singularities");
    one->add_option("--singularities", singularities, "e.g. \"2A7+A3+A1\"")->required();
    add_common(one);
    auto* all = app.add_subcommand("classify-all", "Classify all sets up to a total Milnor number");
    all->add_option("--mu-max", mu_max, "Largest total Milnor number")->check(CLI::Range(1, 19));
    add_common(all);
    CLI11_PARSE(app, argc, argv);

    ClassifyOptions opts;
    opts.diagnostics = diagnostics;
    opts.jobs = jobs;
    opts.cache_dir = cache_dir;
    Classifier classifier(opts);

    std::vector<StratumRecord> records;
    if (one->parsed()) {
        SingularitySet s;
        try {
            s = parse_singularities(singularities);
        } catch (const std::exception& e) {
            std::cerr << "qstrata: " << e.what() << "\n";
            return 1;
        }
        records = classifier.classify(s);
    } else {
        records = classifier.classify_all(mu_max);
    }
    if (extremal) {
        try {
            classifier.mark_extremal(records);
        } catch (const std::exception& e) {
            std::cerr << "qstrata: extremal detection failed: " << e.what() << "\n";
            return 2;
        }
    }

    write_records(std::cout, records, format);
    if (all->parsed() && format == "table") {
        std::cout << "\n";
        write_statistics(std::cout, statistics(records, mu_max), extremal);
    }
    bool failed = false;
    for (const auto& r : records) failed = failed || r.error.has_value();
    return failed ? 2 : 0;
}
