#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qlat/configurations.hpp"
#include "qlat/miranda_morrison.hpp"

namespace qlat {

// A configuration named by its singularity set and kernel generators.
struct FamilyKey {
    SingularitySet set;
    std::vector<Glue> kernel;
};

// Sub-configuration on the Dynkin vertices `keep` (numbered consecutively
// through the summands of s): the inherited kernel, re-expressed on the
// canonical summand order of the induced subgraph.
FamilyKey restrict_kernel(const SingularitySet& s, const std::vector<Glue>& elements, const std::vector<int>& keep);

// Distinct sets obtained by deleting one Dynkin vertex.
std::vector<SingularitySet> one_vertex_subsets(const SingularitySet& s);

// Sub-configurations obtained by deleting one vertex.
std::vector<FamilyKey> one_vertex_perturbations(const Configuration& c);

struct StratumRecord {
    SingularitySet set;
    std::vector<Glue> kernel;
    int r = 0;
    int c = 0;
    bool extremal = false;
    std::optional<std::string> error;
    std::optional<MMDiagnostics> diagnostics;

    int mu() const { return set.mu(); }
    std::string singularities() const { return set.str(); }
    std::vector<std::string> kernel_codes() const;
};

// mu ascending, then singularity string, then kernel code.
bool record_less(const StratumRecord& a, const StratumRecord& b);

struct ClassifyOptions {
    bool diagnostics = false;
    int jobs = 1;
    std::string cache_dir;  // empty: no persistent cache
};

// Counts (r, c) of a realizable configuration, memoized per genus and,
// with a cache directory, per configuration on disk.
class Classifier {
  public:
    explicit Classifier(ClassifyOptions opts = {});
    ~Classifier();
    Classifier(const Classifier&) = delete;
    Classifier& operator=(const Classifier&) = delete;

    // One record per realizable configuration of s.
    std::vector<StratumRecord> classify(const SingularitySet& s);
    StratumRecord classify(const Configuration& c);

    // All sets with mu <= mu_max, sorted.  Sets with a perturbation that has
    // no realizable configuration are skipped.
    std::vector<StratumRecord> classify_all(int mu_max);

    // Marks extremal records: below mu = 19, no one-vertex perturbation of a
    // realizable configuration with mu + 1 lands in the record's orbit.
    // Records with mu >= top are left unmarked.
    void mark_extremal(std::vector<StratumRecord>& records, int top = 19);

    size_t genus_cache_hits() const { return genus_hits_; }

  private:
    struct GenusCounts {
        int e_order = 1;
        int e_plus_order = 1;
    };
    std::optional<GenusCounts> genus_lookup(const std::string& key);
    void genus_store(const std::string& key, GenusCounts v);
    void load_disk_cache();
    void save_disk_cache() const;

    ClassifyOptions opts_;
    std::mutex mu_;
    std::map<std::string, GenusCounts> genus_cache_;
    std::map<std::string, std::pair<int, int>> disk_;  // "set|code" -> (r, c)
    size_t genus_hits_ = 0;
    bool disk_dirty_ = false;
};

// Table-1 style totals per mu.
struct MuStatistics {
    int mu = 0;
    int sets = 0;
    int configurations = 0;
    int real = 0;
    int pairs = 0;
    int extremal = 0;
    int errors = 0;
};
std::vector<MuStatistics> statistics(const std::vector<StratumRecord>& records, int mu_max);

}  // namespace qlat
