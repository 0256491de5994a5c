#include "qlat/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "qlat/definite_binary.hpp"
#include "qlat/genus.hpp"
#include "qlat/normal_form.hpp"

namespace qlat {

FamilyKey restrict_kernel(const SingularitySet& s, const std::vector<Glue>& elements, const std::vector<int>& keep) {
    std::vector<int> start;
    std::vector<std::pair<int, int>> edges;
    int n = 0;
    for (const auto& r : s.summands) {
        start.push_back(n);
        for (auto [a, b] : dynkin_edges(r)) edges.emplace_back(a + n, b + n);
        n += r.rank;
    }
    auto comps = identify_components(n, edges, keep);
    std::stable_sort(comps.begin(), comps.end(),
                     [](const ComponentMatch& a, const ComponentMatch& b) { return a.type < b.type; });
    std::vector<IrreducibleRoot> types;
    for (const auto& c : comps) types.push_back(c.type);
    FamilyKey out{SingularitySet(types), {}};
    if (!(out.set.summands == types)) throw FormError("restrict_kernel: unexpected summand order");

    std::vector<char> kept(static_cast<size_t>(n), 0);
    for (int v : keep) kept[static_cast<size_t>(v)] = 1;
    std::set<Glue> image;
    for (const auto& x : elements) {
        RatVector v(n);
        for (size_t i = 0; i < s.summands.size(); ++i)
            v.segment(start[i], s.summands[i].rank) = class_representative(s.summands[i], x[i]);
        bool inside = true;
        for (int j = 0; j < n; ++j)
            if (!kept[static_cast<size_t>(j)] && !v(j).is_integer()) inside = false;
        if (!inside) continue;
        Glue y;
        for (const auto& c : comps) {
            RatVector w(c.type.rank);
            for (int k = 0; k < c.type.rank; ++k) w(k) = v(c.vertices[static_cast<size_t>(k)]);
            int digit = -1;
            for (int d = 0; d < class_count(c.type) && digit < 0; ++d) {
                RatVector diff = w - class_representative(c.type, d);
                bool integral = true;
                for (Eigen::Index k = 0; k < diff.size(); ++k) integral = integral && diff(k).is_integer();
                if (integral) digit = d;
            }
            if (digit < 0) throw FormError("restrict_kernel: vector outside the dual lattice");
            y.push_back(digit);
        }
        y.push_back(x.back());
        image.insert(y);
    }
    // a generating set, greedily
    std::vector<Glue> gens;
    size_t spanned = 1;
    for (const auto& y : image) {
        if (spanned == image.size()) break;
        auto trial = gens;
        trial.push_back(y);
        const size_t size = glue_span(out.set, trial).size();
        if (size > spanned) {
            gens = std::move(trial);
            spanned = size;
        }
    }
    out.kernel = gens;
    return out;
}

std::vector<SingularitySet> one_vertex_subsets(const SingularitySet& s) {
    std::vector<std::pair<int, int>> edges;
    int n = 0;
    for (const auto& r : s.summands) {
        for (auto [a, b] : dynkin_edges(r)) edges.emplace_back(a + n, b + n);
        n += r.rank;
    }
    std::set<std::string> seen;
    std::vector<SingularitySet> out;
    for (int drop = 0; drop < n; ++drop) {
        std::vector<int> keep;
        for (int v = 0; v < n; ++v)
            if (v != drop) keep.push_back(v);
        std::vector<IrreducibleRoot> types;
        for (const auto& c : identify_components(n, edges, keep)) types.push_back(c.type);
        SingularitySet sub(types);
        if (seen.insert(sub.str()).second) out.push_back(std::move(sub));
    }
    return out;
}

std::vector<FamilyKey> one_vertex_perturbations(const Configuration& c) {
    std::vector<FamilyKey> out;
    const int n = c.set.mu();
    for (int drop = 0; drop < n; ++drop) {
        std::vector<int> keep;
        for (int v = 0; v < n; ++v)
            if (v != drop) keep.push_back(v);
        out.push_back(restrict_kernel(c.set, c.elements, keep));
    }
    return out;
}

std::vector<std::string> StratumRecord::kernel_codes() const {
    std::vector<std::string> out;
    for (const auto& g : kernel) out.push_back(format_glue(g));
    return out;
}

bool record_less(const StratumRecord& a, const StratumRecord& b) {
    if (a.mu() != b.mu()) return a.mu() < b.mu();
    const std::string sa = a.singularities(), sb = b.singularities();
    if (sa != sb) return sa < sb;
    return format_glue(a.kernel) < format_glue(b.kernel);
}

namespace {

std::string genus_key(const GenusSymbol& g) {
    std::ostringstream os;
    os << g.sig_plus << "," << g.sig_minus;
    for (i64 p : primes_of(g.disc)) os << "|" << p << ":" << NormalForm(g.disc, p).str();
    return os.str();
}

std::string record_key(const SingularitySet& s, const std::vector<Glue>& kernel) {
    return s.str() + "|" + format_glue(kernel);
}

const char* kCacheFile = "counts.tsv";

}  // namespace

Classifier::Classifier(ClassifyOptions opts) : opts_(std::move(opts)) {
    if (opts_.jobs < 1) opts_.jobs = 1;
    load_disk_cache();
}

Classifier::~Classifier() {
    try {
        save_disk_cache();
    } catch (...) {
    }
}

void Classifier::load_disk_cache() {
    if (opts_.cache_dir.empty()) return;
    std::ifstream in(std::filesystem::path(opts_.cache_dir) / kCacheFile);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string key;
        int r = 0, c = 0;
        if (std::getline(ls, key, '\t') && (ls >> r >> c)) disk_[key] = {r, c};
    }
}

void Classifier::save_disk_cache() const {
    if (opts_.cache_dir.empty() || !disk_dirty_) return;
    std::filesystem::create_directories(opts_.cache_dir);
    const auto path = std::filesystem::path(opts_.cache_dir) / kCacheFile;
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        for (const auto& [k, v] : disk_) out << k << "\t" << v.first << " " << v.second << "\n";
    }
    std::filesystem::rename(tmp, path);
}

std::optional<Classifier::GenusCounts> Classifier::genus_lookup(const std::string& key) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = genus_cache_.find(key);
    if (it == genus_cache_.end()) return std::nullopt;
    ++genus_hits_;
    return it->second;
}

void Classifier::genus_store(const std::string& key, GenusCounts v) {
    std::lock_guard<std::mutex> lock(mu_);
    genus_cache_.emplace(key, v);
}

StratumRecord Classifier::classify(const Configuration& cfg) {
    StratumRecord rec;
    rec.set = cfg.set;
    rec.kernel = cfg.kernel;
    try {
        const std::string rkey = record_key(cfg.set, cfg.kernel);
        if (!opts_.diagnostics) {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = disk_.find(rkey);
            if (it != disk_.end()) {
                rec.r = it->second.first;
                rec.c = it->second.second;
                return rec;
            }
        }
        ComponentCounts counts;
        if (cfg.set.mu() == 19) {
            counts = binary_counts(cfg);
        } else {
            const GenusSymbol g = complement_genus(cfg);
            const std::string gkey = genus_key(g);
            auto cached = opts_.diagnostics ? std::nullopt : genus_lookup(gkey);
            if (cached && cached->e_order == 1 && cached->e_plus_order == 1) {
                counts = {1, 0};
            } else {
                MirandaMorrison mm(g);
                genus_store(gkey, {mm.e_order(), mm.e_plus_order()});
                if (opts_.diagnostics) {
                    rec.diagnostics = mm.diagnostics(cfg.aut_h);
                    counts = rec.diagnostics->counts;
                } else {
                    counts = mm.component_counts(cfg.aut_h);
                }
            }
        }
        rec.r = counts.real;
        rec.c = counts.pairs;
        if (rec.r + rec.c < 1) throw FormError("no components for a realizable configuration");
        std::lock_guard<std::mutex> lock(mu_);
        disk_[rkey] = {rec.r, rec.c};
        disk_dirty_ = true;
    } catch (const std::exception& e) {
        rec.error = e.what();
    }
    return rec;
}

std::vector<StratumRecord> Classifier::classify(const SingularitySet& s) {
    std::vector<StratumRecord> out;
    if (s.mu() > 19) {
        StratumRecord rec;
        rec.set = s;
        rec.error = "total Milnor number exceeds 19";
        out.push_back(rec);
        return out;
    }
    try {
        for (const auto& c : enumerate_configurations(s))
            if (realizable(c)) out.push_back(classify(c));
    } catch (const std::exception& e) {
        StratumRecord rec;
        rec.set = s;
        rec.error = e.what();
        out.push_back(rec);
    }
    std::sort(out.begin(), out.end(), record_less);
    return out;
}

std::vector<StratumRecord> Classifier::classify_all(int mu_max) {
    std::vector<StratumRecord> out;
    // sets with a realizable configuration (or an error) one level down
    std::set<std::string> alive{SingularitySet().str()};
    for (int mu = 1; mu <= mu_max; ++mu) {
        std::vector<SingularitySet> sets;
        for (auto& s : singularity_sets_of_rank(mu)) {
            // a realizable configuration restricts to one on every perturbation
            bool possible = true;
            for (const auto& sub : one_vertex_subsets(s)) possible = possible && alive.count(sub.str()) > 0;
            if (possible) sets.push_back(std::move(s));
        }
        std::vector<std::vector<StratumRecord>> parts(sets.size());
        std::atomic<size_t> next{0};
        auto worker = [&] {
            for (size_t i = next++; i < sets.size(); i = next++) parts[i] = classify(sets[i]);
        };
        std::vector<std::thread> pool;
        for (int t = 1; t < opts_.jobs; ++t) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();
        alive.clear();
        for (size_t i = 0; i < sets.size(); ++i) {
            if (!parts[i].empty()) alive.insert(sets[i].str());
            for (auto& r : parts[i]) out.push_back(std::move(r));
        }
    }
    std::sort(out.begin(), out.end(), record_less);
    save_disk_cache();
    return out;
}

void Classifier::mark_extremal(std::vector<StratumRecord>& records, int top) {
    std::map<int, std::vector<size_t>> by_mu;
    for (size_t i = 0; i < records.size(); ++i)
        if (!records[i].error) by_mu[records[i].mu()].push_back(i);
    for (auto& [mu, idx] : by_mu) {
        if (mu >= std::min(top, 19)) continue;
        // realizable configurations one step up
        std::vector<Configuration> above;
        auto up = by_mu.find(mu + 1);
        if (up != by_mu.end()) {
            for (size_t i : up->second) above.push_back(make_configuration(records[i].set, records[i].kernel));
        } else {
            std::set<std::string> names;
            std::vector<SingularitySet> targets;
            for (size_t i : idx)
                if (names.insert(records[i].singularities()).second) targets.push_back(records[i].set);
            for (const auto& s : singularity_sets_of_rank(mu + 1)) {
                bool relevant = false;
                for (const auto& t : targets) relevant = relevant || is_perturbation(t, s);
                if (!relevant) continue;
                for (auto& c : enumerate_configurations(s))
                    if (realizable(c)) above.push_back(std::move(c));
            }
        }
        // records at this level, per set, with their kernel sizes
        std::map<std::string, std::vector<std::pair<size_t, size_t>>> here;
        for (size_t i : idx)
            here[records[i].singularities()].emplace_back(i, glue_span(records[i].set, records[i].kernel).size());
        std::set<size_t> reached;
        std::set<std::pair<std::string, std::vector<Glue>>> seen;
        for (const auto& c : above)
            for (const auto& key : one_vertex_perturbations(c)) {
                auto elems = glue_span(key.set, key.kernel);
                if (!seen.insert({key.set.str(), elems}).second) continue;
                auto it = here.find(key.set.str());
                if (it == here.end()) continue;
                std::vector<size_t> cand;
                for (auto [i, size] : it->second)
                    if (size == elems.size()) cand.push_back(i);
                if (cand.size() == 1) {
                    reached.insert(cand[0]);
                    continue;
                }
                for (size_t i : cand)
                    if (same_orbit(key.set, records[i].kernel, key.kernel)) {
                        reached.insert(i);
                        break;
                    }
            }
        for (size_t i : idx) records[i].extremal = !reached.count(i);
    }
}

std::vector<MuStatistics> statistics(const std::vector<StratumRecord>& records, int mu_max) {
    std::vector<MuStatistics> out(static_cast<size_t>(mu_max));
    for (int mu = 1; mu <= mu_max; ++mu) out[static_cast<size_t>(mu - 1)].mu = mu;
    std::set<std::string> sets;
    for (const auto& r : records) {
        if (r.mu() < 1 || r.mu() > mu_max) continue;
        auto& st = out[static_cast<size_t>(r.mu() - 1)];
        if (r.error) {
            ++st.errors;
            continue;
        }
        if (sets.insert(r.singularities()).second) ++st.sets;
        ++st.configurations;
        st.real += r.r;
        st.pairs += r.c;
        st.extremal += r.extremal ? 1 : 0;
    }
    return out;
}

}  // namespace qlat
