#include "hbmut/dataset.hpp"

#include "hbmut/errors.hpp"
#include "tsv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <unordered_map>

namespace hbmut {

const std::vector<std::string>& default_type_catalogue() {
    static const std::vector<std::string> catalogue = {
        "C_in_CpG->A", "C_in_CpG->G", "C_in_CpG->T",
        "G_in_CpG->A", "G_in_CpG->C", "G_in_CpG->T",
        "G_in_GpA->A", "G_in_GpA->C", "G_in_GpA->T",
        "C_in_TpC->A", "C_in_TpC->G", "C_in_TpC->T",
        "A->C",        "A->G",        "A->T",
        "Other_C->A",  "Other_C->G",  "Other_C->T",
        "Other_G->A",  "Other_G->C",  "Other_G->T",
        "T->A",        "T->C",        "T->G",
        "indel",
    };
    return catalogue;
}

bool natural_less(std::string_view lhs, std::string_view rhs) {
    auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
    std::size_t i = 0, j = 0;
    while (i < lhs.size() && j < rhs.size()) {
        if (is_digit(lhs[i]) && is_digit(rhs[j])) {
            std::size_t ei = i, ej = j;
            while (ei < lhs.size() && is_digit(lhs[ei])) ++ei;
            while (ej < rhs.size() && is_digit(rhs[ej])) ++ej;
            auto a = lhs.substr(i, ei - i);
            auto b = rhs.substr(j, ej - j);
            while (a.size() > 1 && a.front() == '0') a.remove_prefix(1);
            while (b.size() > 1 && b.front() == '0') b.remove_prefix(1);
            if (a.size() != b.size()) return a.size() < b.size();
            if (a != b) return a < b;
            i = ei;
            j = ej;
        } else {
            if (lhs[i] != rhs[j]) return lhs[i] < rhs[j];
            ++i;
            ++j;
        }
    }
    if ((lhs.size() - i) != (rhs.size() - j)) return (lhs.size() - i) < (rhs.size() - j);
    return lhs < rhs;
}

// ---------------------------------------------------------------------------
// DatasetBuilder

DatasetBuilder::DatasetBuilder(std::vector<std::string> type_labels) : type_labels_(std::move(type_labels)) {
    std::vector<std::string> sorted = type_labels_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw DataError("duplicate mutation type label");
    if (type_labels_.empty()) throw DataError("no mutation types");
}

std::uint32_t DatasetBuilder::add_gene(std::string_view name) {
    auto [it, inserted] = gene_index_.try_emplace(std::string(name), static_cast<std::uint32_t>(gene_names_.size()));
    if (inserted) gene_names_.emplace_back(name);
    return it->second;
}

std::uint32_t DatasetBuilder::add_sample(std::string_view label) {
    auto [it, inserted] =
        sample_index_.try_emplace(std::string(label), static_cast<std::uint32_t>(sample_labels_.size()));
    if (inserted) sample_labels_.emplace_back(label);
    return it->second;
}

namespace {

template <typename Container>
std::optional<std::uint32_t> linear_find(const Container& c, std::string_view key) {
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i] == key) return static_cast<std::uint32_t>(i);
    return std::nullopt;
}

} // namespace

std::optional<std::uint32_t> DatasetBuilder::gene_id(std::string_view name) const {
    auto it = gene_index_.find(std::string(name));
    if (it == gene_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::uint32_t> DatasetBuilder::type_id(std::string_view label) const {
    return linear_find(type_labels_, label);
}

std::optional<std::uint32_t> DatasetBuilder::sample_id(std::string_view label) const {
    auto it = sample_index_.find(std::string(label));
    if (it == sample_index_.end()) return std::nullopt;
    return it->second;
}

void DatasetBuilder::add_count(std::uint32_t gene, std::uint32_t type, std::uint32_t sample, std::int32_t count) {
    if (count < 0) throw DataError("negative count");
    counts_.push_back({gene, type, sample, count});
}

void DatasetBuilder::add_coverage(std::uint32_t gene, std::uint32_t type, std::uint32_t sample,
                                  std::int64_t coverage) {
    if (coverage < 0) throw DataError("negative coverage");
    coverage_.push_back({gene, type, sample, coverage});
}

void DatasetBuilder::add_broadcast_coverage(std::uint32_t gene, std::uint32_t type, std::int64_t coverage) {
    if (coverage < 0) throw DataError("negative coverage");
    broadcast_.push_back({gene, type, 0, coverage});
}

MutationDataset DatasetBuilder::build() && {
    MutationDataset d;
    const auto G = static_cast<std::uint32_t>(gene_names_.size());
    const auto M = static_cast<std::uint32_t>(type_labels_.size());

    {
        auto sorted = gene_names_;
        std::sort(sorted.begin(), sorted.end());
        auto dup = std::adjacent_find(sorted.begin(), sorted.end());
        if (dup != sorted.end()) throw DataError("duplicate gene name '" + *dup + "'");
    }
    if (sample_labels_.empty() && (!broadcast_.empty() || !coverage_.empty()))
        throw DataError("no sample units: broadcast coverage needs samples named in the counts file");

    // Samples in natural label order.
    std::vector<std::uint32_t> order(sample_labels_.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](auto a, auto b) { return natural_less(sample_labels_[a], sample_labels_[b]); });
    std::vector<std::uint32_t> remap(sample_labels_.size());
    for (std::uint32_t k = 0; k < order.size(); ++k) {
        remap[order[k]] = k;
        SampleUnit unit{k, sample_labels_[order[k]], std::nullopt};
        if (unit.label.rfind("stage:", 0) == 0) unit.stage = unit.label.substr(6);
        d.samples_.push_back(std::move(unit));
    }
    const auto K = static_cast<std::uint32_t>(d.samples_.size());

    d.gene_index_ = std::move(gene_index_);
    d.gene_names_ = std::move(gene_names_);
    for (std::uint32_t m = 0; m < M; ++m) d.types_.push_back({m, type_labels_[m]});

    auto key_less = [](const Entry& a, const Entry& b) {
        return std::tie(a.gene, a.type, a.sample) < std::tie(b.gene, b.type, b.sample);
    };
    auto cell_name = [&](std::uint32_t g, std::uint32_t m, std::uint32_t k) {
        return "(" + d.gene_names_[g] + ", " + d.types_[m].label + ", " + d.samples_[k].label + ")";
    };
    for (auto& e : coverage_) e.sample = remap[e.sample];
    for (auto& e : counts_) e.sample = remap[e.sample];
    std::sort(coverage_.begin(), coverage_.end(), key_less);
    std::sort(broadcast_.begin(), broadcast_.end(), key_less);
    std::sort(counts_.begin(), counts_.end(), key_less);
    for (std::size_t i = 1; i < coverage_.size(); ++i)
        if (!key_less(coverage_[i - 1], coverage_[i]))
            throw DataError("duplicate coverage for " + cell_name(coverage_[i].gene, coverage_[i].type, coverage_[i].sample));
    for (std::size_t i = 1; i < broadcast_.size(); ++i)
        if (!key_less(broadcast_[i - 1], broadcast_[i]))
            throw DataError("duplicate coverage for (" + d.gene_names_[broadcast_[i].gene] + ", " +
                            d.types_[broadcast_[i].type].label + ")");

    // Canonical coverage rows: group samples of one (gene, type) by value.
    std::map<std::vector<std::uint32_t>, std::uint32_t> set_ids;
    std::vector<std::vector<std::uint32_t>> sets;
    std::vector<std::int64_t> per_sample(K);
    std::vector<std::pair<std::int64_t, std::uint32_t>> by_value;
    std::size_t ci = 0, bi = 0;
    d.gene_row_offsets_.assign(G + 1, 0);
    while (ci < coverage_.size() || bi < broadcast_.size()) {
        std::uint32_t g, m;
        if (bi >= broadcast_.size() ||
            (ci < coverage_.size() &&
             std::tie(coverage_[ci].gene, coverage_[ci].type) < std::tie(broadcast_[bi].gene, broadcast_[bi].type))) {
            g = coverage_[ci].gene;
            m = coverage_[ci].type;
        } else {
            g = broadcast_[bi].gene;
            m = broadcast_[bi].type;
        }
        std::fill(per_sample.begin(), per_sample.end(), 0);
        if (bi < broadcast_.size() && broadcast_[bi].gene == g && broadcast_[bi].type == m) {
            std::fill(per_sample.begin(), per_sample.end(), broadcast_[bi].value);
            ++bi;
        }
        while (ci < coverage_.size() && coverage_[ci].gene == g && coverage_[ci].type == m) {
            per_sample[coverage_[ci].sample] = coverage_[ci].value;
            ++ci;
        }
        by_value.clear();
        for (std::uint32_t k = 0; k < K; ++k)
            if (per_sample[k] > 0) by_value.emplace_back(per_sample[k], k);
        std::sort(by_value.begin(), by_value.end());
        for (std::size_t i = 0; i < by_value.size();) {
            std::size_t j = i;
            std::vector<std::uint32_t> members;
            while (j < by_value.size() && by_value[j].first == by_value[i].first) members.push_back(by_value[j++].second);
            auto [it, inserted] = set_ids.try_emplace(members, static_cast<std::uint32_t>(sets.size()));
            if (inserted) sets.push_back(members);
            d.rows_.push_back({g, m, it->second, by_value[i].first});
            i = j;
        }
        d.gene_row_offsets_[g + 1] = static_cast<std::uint32_t>(d.rows_.size());
    }
    for (std::uint32_t g = 0; g < G; ++g)
        d.gene_row_offsets_[g + 1] = std::max(d.gene_row_offsets_[g + 1], d.gene_row_offsets_[g]);

    d.set_offsets_.push_back(0);
    for (const auto& s : sets) {
        d.set_members_.insert(d.set_members_.end(), s.begin(), s.end());
        d.set_offsets_.push_back(static_cast<std::uint32_t>(d.set_members_.size()));
    }

    // Indices: rows by type, sets by sample.
    d.type_row_offsets_.assign(M + 1, 0);
    for (const auto& r : d.rows_) ++d.type_row_offsets_[r.type + 1];
    for (std::uint32_t m = 0; m < M; ++m) d.type_row_offsets_[m + 1] += d.type_row_offsets_[m];
    d.type_row_index_.resize(d.rows_.size());
    {
        auto fill = d.type_row_offsets_;
        for (std::uint32_t i = 0; i < d.rows_.size(); ++i) d.type_row_index_[fill[d.rows_[i].type]++] = i;
    }
    d.sets_by_sample_offsets_.assign(K + 1, 0);
    for (const auto& s : sets)
        for (auto k : s) ++d.sets_by_sample_offsets_[k + 1];
    for (std::uint32_t k = 0; k < K; ++k) d.sets_by_sample_offsets_[k + 1] += d.sets_by_sample_offsets_[k];
    d.sets_by_sample_.resize(d.sets_by_sample_offsets_[K]);
    {
        auto fill = d.sets_by_sample_offsets_;
        for (std::uint32_t s = 0; s < sets.size(); ++s)
            for (auto k : sets[s]) d.sets_by_sample_[fill[k]++] = s;
    }

    // Coverage totals.
    d.gene_coverage_.assign(G, 0.0);
    std::vector<double> type_cov(M, 0.0), sample_cov(K, 0.0);
    for (const auto& r : d.rows_) {
        auto members = d.sample_set(r.sample_set);
        const double cov = static_cast<double>(r.coverage);
        d.gene_coverage_[r.gene] += cov * static_cast<double>(members.size());
        type_cov[r.type] += cov * static_cast<double>(members.size());
        for (auto k : members) sample_cov[k] += cov;
    }
    for (double c : d.gene_coverage_) d.total_coverage_ += c;

    // Counts.
    d.gene_counts_.assign(G, 0);
    d.type_counts_.assign(M, 0);
    d.sample_counts_.assign(K, 0);
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        const auto& e = counts_[i];
        if (i > 0 && !key_less(counts_[i - 1], e))
            throw DataError("duplicate count for " + cell_name(e.gene, e.type, e.sample));
        if (e.value == 0) continue;
        const auto T = d.coverage(e.gene, e.type, e.sample);
        if (T <= 0)
            throw DataError("positive count with zero coverage at " + cell_name(e.gene, e.type, e.sample));
        d.counts_.push_back({e.gene, e.type, e.sample, static_cast<std::int32_t>(e.value)});
        d.gene_counts_[e.gene] += e.value;
        d.type_counts_[e.type] += e.value;
        d.sample_counts_[e.sample] += e.value;
        d.total_count_ += e.value;
        const double x = static_cast<double>(e.value);
        d.log_count_constant_ += x * std::log(static_cast<double>(T)) - std::lgamma(x + 1.0);
    }

    for (std::uint32_t m = 0; m < M; ++m)
        if (!(type_cov[m] > 0.0))
            throw DataError("mutation type '" + d.types_[m].label + "' has zero total coverage");
    for (std::uint32_t k = 0; k < K; ++k)
        if (!(sample_cov[k] > 0.0))
            throw DataError("sample unit '" + d.samples_[k].label + "' has zero total coverage");

    // Mutated genes per sample.
    d.mutated_by_sample_offsets_.assign(K + 1, 0);
    std::vector<std::vector<std::uint32_t>> mutated(K);
    for (const auto& c : d.counts_)
        if (mutated[c.sample].empty() || mutated[c.sample].back() != c.gene) mutated[c.sample].push_back(c.gene);
    for (std::uint32_t k = 0; k < K; ++k) {
        auto& v = mutated[k];
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        d.mutated_by_sample_.insert(d.mutated_by_sample_.end(), v.begin(), v.end());
        d.mutated_by_sample_offsets_[k + 1] = static_cast<std::uint32_t>(d.mutated_by_sample_.size());
    }
    return d;
}

// ---------------------------------------------------------------------------
// MutationDataset

std::optional<std::uint32_t> MutationDataset::find_gene(std::string_view name) const {
    auto it = gene_index_.find(std::string(name));
    if (it == gene_index_.end()) return std::nullopt;
    return it->second;
}

bool MutationDataset::has_pooled_samples() const {
    return std::any_of(samples_.begin(), samples_.end(), [](const auto& s) { return s.pooled(); });
}

std::span<const CoverageRow> MutationDataset::gene_rows(std::uint32_t g) const {
    return std::span<const CoverageRow>(rows_).subspan(gene_row_offsets_[g],
                                                        gene_row_offsets_[g + 1] - gene_row_offsets_[g]);
}

std::span<const std::uint32_t> MutationDataset::type_rows(std::uint32_t m) const {
    return std::span<const std::uint32_t>(type_row_index_)
        .subspan(type_row_offsets_[m], type_row_offsets_[m + 1] - type_row_offsets_[m]);
}

std::span<const std::uint32_t> MutationDataset::sample_set(std::uint32_t s) const {
    return std::span<const std::uint32_t>(set_members_).subspan(set_offsets_[s], set_offsets_[s + 1] - set_offsets_[s]);
}

std::span<const std::uint32_t> MutationDataset::sets_containing(std::uint32_t k) const {
    return std::span<const std::uint32_t>(sets_by_sample_)
        .subspan(sets_by_sample_offsets_[k], sets_by_sample_offsets_[k + 1] - sets_by_sample_offsets_[k]);
}

std::span<const std::uint32_t> MutationDataset::mutated_genes_in_sample(std::uint32_t k) const {
    return std::span<const std::uint32_t>(mutated_by_sample_)
        .subspan(mutated_by_sample_offsets_[k], mutated_by_sample_offsets_[k + 1] - mutated_by_sample_offsets_[k]);
}

std::int64_t MutationDataset::coverage(std::uint32_t g, std::uint32_t m, std::uint32_t k) const {
    for (const auto& r : gene_rows(g)) {
        if (r.type != m) continue;
        auto members = sample_set(r.sample_set);
        if (std::binary_search(members.begin(), members.end(), k)) return r.coverage;
    }
    return 0;
}

std::int32_t MutationDataset::count(std::uint32_t g, std::uint32_t m, std::uint32_t k) const {
    auto it = std::lower_bound(counts_.begin(), counts_.end(), CountCell{g, m, k, 0}, [](const auto& a, const auto& b) {
        return std::tie(a.gene, a.type, a.sample) < std::tie(b.gene, b.type, b.sample);
    });
    if (it != counts_.end() && it->gene == g && it->type == m && it->sample == k) return it->count;
    return 0;
}

double MutationDataset::crude_rate() const {
    if (total_coverage_ <= 0.0) return 0.0;
    const double x = total_count_ > 0 ? static_cast<double>(total_count_) : 1.0;
    return x / total_coverage_;
}

// ---------------------------------------------------------------------------
// File formats

namespace {

std::vector<std::string> read_types_file(const std::filesystem::path& path) {
    tsv::Reader reader(path);
    std::vector<std::string> labels;
    std::string line;
    while (reader.next(line)) {
        auto label = tsv::trim(line);
        if (label.empty()) continue;
        if (label.find('\t') != std::string_view::npos) reader.fail("type label contains a tab");
        labels.emplace_back(label);
    }
    if (labels.empty()) throw ParseError(path.string() + ": no mutation types listed");
    return labels;
}

struct LabelIndex {
    std::unordered_map<std::string, std::uint32_t> ids;

    std::optional<std::uint32_t> find(std::string_view key) const {
        auto it = ids.find(std::string(key));
        if (it == ids.end()) return std::nullopt;
        return it->second;
    }
};

} // namespace

MutationDataset load_dataset(const std::filesystem::path& counts_path, const std::filesystem::path& coverage_path,
                             const std::optional<std::filesystem::path>& types_path) {
    const auto labels = types_path ? read_types_file(*types_path) : default_type_catalogue();
    DatasetBuilder builder(labels);
    LabelIndex types;
    for (std::uint32_t m = 0; m < labels.size(); ++m) types.ids.emplace(labels[m], m);
    auto sample_of = [&](std::string_view label) { return builder.add_sample(label); };

    // Coverage first: it defines the gene universe.
    {
        tsv::Reader reader(coverage_path);
        std::string line;
        if (!reader.next(line)) throw ParseError(coverage_path.string() + ": missing header");
        bool per_sample;
        if (line == "gene\ttype\tsample\tcoverage")
            per_sample = true;
        else if (line == "gene\ttype\tcoverage")
            per_sample = false;
        else
            reader.fail("expected header 'gene<TAB>type<TAB>sample<TAB>coverage' or 'gene<TAB>type<TAB>coverage'");
        const std::size_t ncol = per_sample ? 4 : 3;
        while (reader.next(line)) {
            auto cols = tsv::split(line);
            if (cols.size() != ncol)
                reader.fail("expected " + std::to_string(ncol) + " columns, found " + std::to_string(cols.size()));
            if (cols[0].empty()) reader.fail("empty gene name");
            auto type = types.find(cols[1]);
            if (!type) reader.fail("unknown mutation type '" + std::string(cols[1]) + "'");
            std::int64_t value;
            if (!tsv::parse_int(cols[ncol - 1], value)) reader.fail("coverage is not an integer");
            if (value < 0) reader.fail("negative coverage");
            const auto g = builder.add_gene(cols[0]);
            if (per_sample) {
                if (cols[2].empty()) reader.fail("empty sample label");
                builder.add_coverage(g, *type, sample_of(cols[2]), value);
            } else {
                builder.add_broadcast_coverage(g, *type, value);
            }
        }
    }
    {
        tsv::Reader reader(counts_path);
        std::string line;
        if (!reader.next(line)) throw ParseError(counts_path.string() + ": missing header");
        if (line != "gene\ttype\tsample\tcount") reader.fail("expected header 'gene<TAB>type<TAB>sample<TAB>count'");
        while (reader.next(line)) {
            auto cols = tsv::split(line);
            if (cols.size() != 4) reader.fail("expected 4 columns, found " + std::to_string(cols.size()));
            auto type = types.find(cols[1]);
            if (!type) reader.fail("unknown mutation type '" + std::string(cols[1]) + "'");
            std::int32_t value;
            if (!tsv::parse_int(cols[3], value)) reader.fail("count is not a 32-bit integer");
            if (value < 0) reader.fail("negative count");
            if (cols[2].empty()) reader.fail("empty sample label");
            auto g = builder.gene_id(cols[0]);
            if (!g)
                throw DataError(counts_path.string() + ":" + std::to_string(reader.line_no()) + ": gene '" +
                                std::string(cols[0]) + "' has counts but no coverage");
            builder.add_count(*g, *type, sample_of(cols[2]), value);
        }
    }
    return std::move(builder).build();
}

void write_dataset(const MutationDataset& data, const std::filesystem::path& counts_path,
                   const std::filesystem::path& coverage_path) {
    {
        std::ofstream out(counts_path);
        if (!out) throw DataError("cannot write " + counts_path.string());
        out << "gene\ttype\tsample\tcount\n";
        for (const auto& c : data.counts())
            out << data.gene_name(c.gene) << '\t' << data.types()[c.type].label << '\t'
                << data.samples()[c.sample].label << '\t' << c.count << '\n';
    }
    const auto K = data.num_samples();
    bool broadcast = std::all_of(data.sample_counts().begin(), data.sample_counts().end(),
                                 [](auto x) { return x > 0; });
    for (const auto& r : data.coverage_rows())
        if (data.sample_set(r.sample_set).size() != K) broadcast = false;

    std::ofstream out(coverage_path);
    if (!out) throw DataError("cannot write " + coverage_path.string());
    out << (broadcast ? "gene\ttype\tcoverage\n" : "gene\ttype\tsample\tcoverage\n");
    for (std::uint32_t g = 0; g < data.num_genes(); ++g) {
        auto rows = data.gene_rows(g);
        if (rows.empty()) {
            // keep the gene in the universe
            out << data.gene_name(g) << '\t' << data.types()[0].label << '\t';
            if (!broadcast) out << (K > 0 ? data.samples()[0].label : std::string("NA")) << '\t';
            out << 0 << '\n';
            continue;
        }
        if (broadcast) {
            for (const auto& r : rows)
                out << data.gene_name(g) << '\t' << data.types()[r.type].label << '\t' << r.coverage << '\n';
            continue;
        }
        // Per-sample rows ordered by (type, sample).
        std::vector<std::tuple<std::uint32_t, std::uint32_t, std::int64_t>> cells;
        for (const auto& r : rows)
            for (auto k : data.sample_set(r.sample_set)) cells.emplace_back(r.type, k, r.coverage);
        std::sort(cells.begin(), cells.end());
        for (const auto& [m, k, t] : cells)
            out << data.gene_name(g) << '\t' << data.types()[m].label << '\t' << data.samples()[k].label << '\t' << t
                << '\n';
    }
}

void write_types(const MutationDataset& data, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& t : data.types()) out << t.label << '\n';
}

std::uint64_t fingerprint(const MutationDataset& data) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix_bytes = [&](const void* p, std::size_t n) {
        auto bytes = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ull;
        }
    };
    auto mix_str = [&](const std::string& s) {
        mix_bytes(s.data(), s.size());
        mix_bytes("\0", 1);
    };
    for (const auto& n : data.gene_names()) mix_str(n);
    for (const auto& t : data.types()) mix_str(t.label);
    for (const auto& s : data.samples()) mix_str(s.label);
    for (const auto& c : data.counts()) {
        std::uint32_t v[4] = {c.gene, c.type, c.sample, static_cast<std::uint32_t>(c.count)};
        mix_bytes(v, sizeof v);
    }
    for (const auto& r : data.coverage_rows()) {
        std::uint32_t v[2] = {r.gene, r.type};
        mix_bytes(v, sizeof v);
        mix_bytes(&r.coverage, sizeof r.coverage);
        for (auto k : data.sample_set(r.sample_set)) mix_bytes(&k, sizeof k);
    }
    return h;
}

} // namespace hbmut
