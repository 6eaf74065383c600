#pragma once
// Somatic mutation counts X[g,m,k] and coverage T[g,m,k] over
// genes x mutation types x sample units.
//
// Coverage is stored canonically: for every (gene, type) the sample units
// sharing one coverage value are grouped into an interned sample set, so a
// row (g, m, s, T) stands for T[g,m,k] = T for every k in s. Broadcast
// coverage (one value per gene and type) costs one row per (g, m) instead of
// K. Cells not covered by any row have T = 0 ("not sequenced").

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hbmut {

struct MutationType {
    std::uint32_t id = 0;
    std::string label;
};

// One tumor sample, or one pooled stage when only stage-level counts exist.
// Labels of the form "stage:<name>" mark pooled stages.
struct SampleUnit {
    std::uint32_t id = 0;
    std::string label;
    std::optional<std::string> stage;

    bool pooled() const { return stage.has_value(); }
};

struct CountCell {
    std::uint32_t gene = 0;
    std::uint32_t type = 0;
    std::uint32_t sample = 0;
    std::int32_t count = 0;
};

struct CoverageRow {
    std::uint32_t gene = 0;
    std::uint32_t type = 0;
    std::uint32_t sample_set = 0;
    std::int64_t coverage = 0;
};

// 24 point-mutation types (context x target base) plus one indel category.
const std::vector<std::string>& default_type_catalogue();

// Ordering that compares embedded digit runs numerically ("s2" < "s10").
bool natural_less(std::string_view lhs, std::string_view rhs);

class MutationDataset;

class DatasetBuilder {
  public:
    explicit DatasetBuilder(std::vector<std::string> type_labels = default_type_catalogue());

    std::uint32_t add_gene(std::string_view name);
    std::uint32_t add_sample(std::string_view label);

    std::optional<std::uint32_t> gene_id(std::string_view name) const;
    std::optional<std::uint32_t> type_id(std::string_view label) const;
    std::optional<std::uint32_t> sample_id(std::string_view label) const;

    void add_count(std::uint32_t gene, std::uint32_t type, std::uint32_t sample, std::int32_t count);
    void add_coverage(std::uint32_t gene, std::uint32_t type, std::uint32_t sample, std::int64_t coverage);
    // Same coverage for every sample unit of the dataset; per-sample rows win.
    void add_broadcast_coverage(std::uint32_t gene, std::uint32_t type, std::int64_t coverage);

    // Validates and canonicalizes. Throws DataError.
    MutationDataset build() &&;

  private:
    struct Entry {
        std::uint32_t gene, type, sample;
        std::int64_t value;
    };

    std::vector<std::string> type_labels_;
    std::vector<std::string> gene_names_;
    std::unordered_map<std::string, std::uint32_t> gene_index_;
    std::vector<std::string> sample_labels_;
    std::unordered_map<std::string, std::uint32_t> sample_index_;
    std::vector<Entry> counts_;
    std::vector<Entry> coverage_;
    std::vector<Entry> broadcast_;
};

class MutationDataset {
  public:
    std::size_t num_genes() const { return gene_names_.size(); }
    std::size_t num_types() const { return types_.size(); }
    std::size_t num_samples() const { return samples_.size(); }

    const std::vector<std::string>& gene_names() const { return gene_names_; }
    const std::string& gene_name(std::uint32_t g) const { return gene_names_[g]; }
    std::optional<std::uint32_t> find_gene(std::string_view name) const;
    const std::vector<MutationType>& types() const { return types_; }
    const std::vector<SampleUnit>& samples() const { return samples_; }
    bool has_pooled_samples() const;

    std::span<const CountCell> counts() const { return counts_; }
    std::span<const CoverageRow> coverage_rows() const { return rows_; }
    std::span<const CoverageRow> gene_rows(std::uint32_t g) const;
    std::span<const std::uint32_t> type_rows(std::uint32_t m) const;
    std::span<const std::uint32_t> sample_set(std::uint32_t s) const;
    std::size_t num_sample_sets() const { return set_offsets_.size() - 1; }
    std::span<const std::uint32_t> sets_containing(std::uint32_t k) const;

    // Point lookups; O(rows of gene) and O(log nnz) respectively.
    std::int64_t coverage(std::uint32_t g, std::uint32_t m, std::uint32_t k) const;
    std::int32_t count(std::uint32_t g, std::uint32_t m, std::uint32_t k) const;

    std::int64_t gene_count(std::uint32_t g) const { return gene_counts_[g]; }
    const std::vector<std::int64_t>& gene_counts() const { return gene_counts_; }
    const std::vector<std::int64_t>& type_counts() const { return type_counts_; }
    const std::vector<std::int64_t>& sample_counts() const { return sample_counts_; }
    std::int64_t total_count() const { return total_count_; }

    // Coverage summed over types and samples (sample sets expanded).
    double gene_coverage(std::uint32_t g) const { return gene_coverage_[g]; }
    double total_coverage() const { return total_coverage_; }

    // Sum over nonzero count cells of X log T - log X!; the part of the
    // Poisson log-likelihood that does not depend on any parameter.
    double log_count_constant() const { return log_count_constant_; }

    // Total count / total coverage; falls back to 1 / total coverage when
    // there are no mutations at all.
    double crude_rate() const;

    // Genes with at least one mutation in sample k (ascending ids).
    std::span<const std::uint32_t> mutated_genes_in_sample(std::uint32_t k) const;

  private:
    friend class DatasetBuilder;

    std::vector<std::string> gene_names_;
    std::unordered_map<std::string, std::uint32_t> gene_index_;
    std::vector<MutationType> types_;
    std::vector<SampleUnit> samples_;
    std::vector<CountCell> counts_;
    std::vector<CoverageRow> rows_;
    std::vector<std::uint32_t> gene_row_offsets_;
    std::vector<std::uint32_t> type_row_index_;
    std::vector<std::uint32_t> type_row_offsets_;
    std::vector<std::uint32_t> set_members_;
    std::vector<std::uint32_t> set_offsets_;
    std::vector<std::uint32_t> sets_by_sample_;
    std::vector<std::uint32_t> sets_by_sample_offsets_;
    std::vector<std::uint32_t> mutated_by_sample_;
    std::vector<std::uint32_t> mutated_by_sample_offsets_;
    std::vector<std::int64_t> gene_counts_;
    std::vector<std::int64_t> type_counts_;
    std::vector<std::int64_t> sample_counts_;
    std::vector<double> gene_coverage_;
    std::int64_t total_count_ = 0;
    double total_coverage_ = 0.0;
    double log_count_constant_ = 0.0;
};

// Reads the counts / coverage TSV files. Throws ParseError for malformed rows
// and DataError for validation failures.
MutationDataset load_dataset(const std::filesystem::path& counts_path,
                             const std::filesystem::path& coverage_path,
                             const std::optional<std::filesystem::path>& types_path = std::nullopt);

// Coverage is written in broadcast form when every row covers all samples and
// every sample carries at least one count; otherwise per sample.
void write_dataset(const MutationDataset& data,
                   const std::filesystem::path& counts_path,
                   const std::filesystem::path& coverage_path);
void write_types(const MutationDataset& data, const std::filesystem::path& path);

// FNV-1a over the canonical content.
std::uint64_t fingerprint(const MutationDataset& data);

} // namespace hbmut
