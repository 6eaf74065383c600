#include "hbmut/trace_io.hpp"

#include "hbmut/errors.hpp"
#include "number_format.hpp"
#include "tsv.hpp"

#include <fstream>
#include <ostream>

namespace hbmut {

namespace {

constexpr const char* kHeader = "iteration\tgamma\tpi\tclusters\tloglik\talpha\tbeta\tlambda\tdelta";

void append_list(std::string& buf, const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) buf += ',';
        append_double(buf, v[i]);
    }
}

std::vector<double> parse_list(std::string_view s, tsv::Reader& reader) {
    std::vector<double> out;
    if (s.empty()) return out;
    for (auto part : tsv::split(s, ',')) {
        double v = 0.0;
        if (!tsv::parse_double(part, v)) reader.fail("bad number '" + std::string(part) + "'");
        out.push_back(v);
    }
    return out;
}

} // namespace

void write_trace(std::ostream& out, const Trace& trace) {
    out << "# model=" << to_string(trace.model);
    if (trace.lambda0) out << " lambda0=" << format_double(*trace.lambda0);
    out << '\n' << kHeader << '\n';
    std::string buf;
    for (const auto& r : trace.records) {
        buf.clear();
        buf += std::to_string(r.iteration);
        buf += '\t';
        append_double(buf, r.gamma);
        buf += '\t';
        if (r.pi)
            append_double(buf, *r.pi);
        else
            buf += "NA";
        buf += '\t';
        buf += std::to_string(r.clusters);
        buf += '\t';
        append_double(buf, r.log_likelihood);
        buf += '\t';
        append_list(buf, r.alpha);
        buf += '\t';
        append_list(buf, r.beta);
        buf += '\t';
        append_list(buf, r.lambda);
        buf += '\t';
        if (trace.model == ModelKind::driver)
            for (auto d : r.delta) buf += d ? '1' : '0';
        else
            buf += "NA";
        buf += '\n';
        out << buf;
    }
}

void write_trace(const Trace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    write_trace(out, trace);
}

Trace read_trace(const std::filesystem::path& path) {
    // The model line is a comment, so read it before the Reader skips it.
    Trace trace;
    {
        std::ifstream in(path);
        std::string first;
        if (!in || !std::getline(in, first)) throw ParseError(path.string() + ": cannot read trace");
        if (first.rfind("# model=", 0) != 0) throw ParseError(path.string() + ":1: missing model line");
        auto fields = tsv::split(std::string_view(first).substr(2), ' ');
        for (auto f : fields) {
            if (f.rfind("model=", 0) == 0) trace.model = parse_model_kind(std::string(f.substr(6)));
            if (f.rfind("lambda0=", 0) == 0) {
                double v = 0.0;
                if (!tsv::parse_double(f.substr(8), v)) throw ParseError(path.string() + ":1: bad lambda0");
                trace.lambda0 = v;
            }
        }
    }
    tsv::Reader reader(path);
    std::string line;
    if (!reader.next(line) || line != kHeader) reader.fail("unexpected trace header");
    while (reader.next(line)) {
        auto cols = tsv::split(line);
        if (cols.size() != 9) reader.fail("expected 9 columns");
        TraceRecord r;
        if (!tsv::parse_int(cols[0], r.iteration)) reader.fail("bad iteration");
        if (!tsv::parse_double(cols[1], r.gamma)) reader.fail("bad gamma");
        if (cols[2] != "NA") {
            double pi = 0.0;
            if (!tsv::parse_double(cols[2], pi)) reader.fail("bad pi");
            r.pi = pi;
        }
        if (!tsv::parse_int(cols[3], r.clusters)) reader.fail("bad clusters");
        if (!tsv::parse_double(cols[4], r.log_likelihood)) reader.fail("bad loglik");
        r.alpha = parse_list(cols[5], reader);
        r.beta = parse_list(cols[6], reader);
        r.lambda = parse_list(cols[7], reader);
        if (trace.model == ModelKind::driver) {
            for (char c : cols[8]) {
                if (c != '0' && c != '1') reader.fail("bad delta string");
                r.delta.push_back(c == '1');
            }
            if (r.delta.size() != r.lambda.size()) reader.fail("delta and lambda lengths differ");
            r.increment.resize(r.lambda.size());
            for (std::size_t g = 0; g < r.lambda.size(); ++g)
                r.increment[g] = r.delta[g] ? r.lambda[g] - trace.lambda0.value_or(0.0) : 0.0;
        }
        if (trace.num_genes == 0) trace.num_genes = r.lambda.size();
        if (r.lambda.size() != trace.num_genes) reader.fail("record has a different gene count");
        trace.records.push_back(std::move(r));
    }
    return trace;
}

} // namespace hbmut
