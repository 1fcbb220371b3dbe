#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlbels/labels.hpp"
#include "mlbels/matrix.hpp"

namespace mlbels {

struct DatasetHeader {
    enum class LabelPosition { Prefix, Suffix };

    std::size_t n_features = 0;
    std::size_t n_labels = 0;
    LabelPosition label_position = LabelPosition::Prefix;
    std::string name;
    std::size_t n_instances = 0;  // 0 when not known up front
};

/// One time step of the stream: features plus labels over {-1, 0, +1}.
struct Chunk {
    Matrix x;
    LabelObservation labels;

    std::size_t rows() const { return x.rows(); }
};

/// Single-consumer chunk source. next() returns nullopt at end of stream.
class ChunkStream {
public:
    virtual ~ChunkStream() = default;
    virtual const DatasetHeader& header() const = 0;
    virtual std::optional<Chunk> next() = 0;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& path, std::size_t line, const std::string& what)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline bool iequals_prefix(const std::string& s, const char* kw) {
    std::size_t i = 0;
    for (; kw[i] != '\0'; ++i) {
        if (i >= s.size()) return false;
        if (std::tolower(static_cast<unsigned char>(s[i])) != kw[i]) return false;
    }
    return true;
}

inline bool parse_double(const std::string& tok, double& out) {
    const char* begin = tok.data();
    const char* end = begin + tok.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

} // namespace detail

namespace arff {

struct Attribute {
    std::string name;
    bool nominal = false;
    std::vector<std::string> values;  // nominal only

    /// Numeric value of a token; nominal tokens map to their declared index.
    double decode(const std::string& token, const std::string& path, std::size_t line) const {
        if (!nominal) {
            double v;
            if (!detail::parse_double(token, v))
                throw ParseError(path, line, "expected numeric value for attribute '" + name +
                                                 "', got '" + token + "'");
            return v;
        }
        for (std::size_t i = 0; i < values.size(); ++i)
            if (values[i] == token) return static_cast<double>(i);
        throw ParseError(path, line,
                         "unknown nominal value '" + token + "' for attribute '" + name + "'");
    }
};

struct FileLayout {
    DatasetHeader header;
    std::vector<Attribute> attributes;
    std::size_t data_line = 0;  // 1-based line of @data

    std::size_t label_offset() const {
        return header.label_position == DatasetHeader::LabelPosition::Prefix
                   ? 0
                   : attributes.size() - header.n_labels;
    }
    std::size_t feature_offset() const {
        return header.label_position == DatasetHeader::LabelPosition::Prefix ? header.n_labels : 0;
    }
    bool is_label(std::size_t attr_index) const {
        const std::size_t off = label_offset();
        return attr_index >= off && attr_index < off + header.n_labels;
    }
};

/// The MEKA/MULAN convention stores the label count in the relation name as
/// "-C n"; n > 0 means the first n attributes are labels, n < 0 the last |n|.
inline std::optional<int> label_count_from_relation(const std::string& relation) {
    std::size_t pos = relation.find("-C");
    if (pos == std::string::npos) pos = relation.find("-c");
    if (pos == std::string::npos) return std::nullopt;
    std::istringstream in(relation.substr(pos + 2));
    int v;
    if (in >> v) return v;
    return std::nullopt;
}

inline std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '\'' && s.back() == '\'') ||
                          (s.front() == '"' && s.back() == '"')))
        return s.substr(1, s.size() - 2);
    return s;
}

struct LoadOptions {
    std::size_t chunk_size = 500;
    std::optional<std::size_t> label_count;
    std::optional<DatasetHeader::LabelPosition> label_position;
    bool streaming_scaling = false;  // running min/max instead of a first pass
};

/// Parse everything up to and including @data.
inline FileLayout parse_layout(std::istream& in, const std::string& path,
                               const LoadOptions& opt) {
    FileLayout layout;
    std::string line;
    std::size_t line_no = 0;
    std::optional<int> relation_c;
    bool saw_data = false;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '%') continue;
        if (t[0] != '@') throw ParseError(path, line_no, "expected declaration before @data");

        if (detail::iequals_prefix(t, "@relation")) {
            const std::string rel = unquote(detail::trim(t.substr(9)));
            layout.header.name = rel;
            relation_c = label_count_from_relation(rel);
        } else if (detail::iequals_prefix(t, "@attribute")) {
            std::string rest = detail::trim(t.substr(10));
            Attribute attr;
            if (rest.empty()) throw ParseError(path, line_no, "empty attribute declaration");
            if (rest[0] == '\'' || rest[0] == '"') {
                const char q = rest[0];
                const std::size_t close = rest.find(q, 1);
                if (close == std::string::npos)
                    throw ParseError(path, line_no, "unterminated attribute name");
                attr.name = rest.substr(1, close - 1);
                rest = detail::trim(rest.substr(close + 1));
            } else {
                const std::size_t sp = rest.find_first_of(" \t");
                if (sp == std::string::npos)
                    throw ParseError(path, line_no, "attribute without a type");
                attr.name = rest.substr(0, sp);
                rest = detail::trim(rest.substr(sp));
            }
            if (!rest.empty() && rest[0] == '{') {
                attr.nominal = true;
                const std::size_t close = rest.find('}');
                if (close == std::string::npos)
                    throw ParseError(path, line_no, "unterminated nominal list");
                std::string body = rest.substr(1, close - 1);
                std::string item;
                std::istringstream items(body);
                while (std::getline(items, item, ',')) attr.values.push_back(detail::trim(item));
                if (attr.values.empty())
                    throw ParseError(path, line_no, "empty nominal list");
            }
            layout.attributes.push_back(std::move(attr));
        } else if (detail::iequals_prefix(t, "@data")) {
            layout.data_line = line_no;
            saw_data = true;
            break;
        } else {
            throw ParseError(path, line_no, "unknown declaration: " + t);
        }
    }
    if (!saw_data) throw ParseError(path, line_no, "missing @data section");
    if (layout.attributes.empty()) throw ParseError(path, line_no, "no attributes declared");

    std::size_t labels = 0;
    DatasetHeader::LabelPosition position = DatasetHeader::LabelPosition::Prefix;
    if (opt.label_count) {
        labels = *opt.label_count;
    } else if (relation_c) {
        labels = static_cast<std::size_t>(std::abs(*relation_c));
        if (*relation_c < 0) position = DatasetHeader::LabelPosition::Suffix;
    } else {
        throw ParseError(path, layout.data_line,
                         "label count not found in @relation (-C n) and no override given");
    }
    if (opt.label_position) position = *opt.label_position;
    if (labels == 0 || labels >= layout.attributes.size())
        throw ParseError(path, layout.data_line, "label count out of range");

    layout.header.n_labels = labels;
    layout.header.n_features = layout.attributes.size() - labels;
    layout.header.label_position = position;
    return layout;
}

/// One data row decoded to per-attribute numeric values. Handles both dense
/// comma-separated rows and sparse {index value, ...} rows.
inline std::vector<double> parse_row(const std::string& line, const FileLayout& layout,
                                     const std::string& path, std::size_t line_no) {
    const std::size_t n_attr = layout.attributes.size();
    std::vector<double> row(n_attr, 0.0);
    const std::string t = detail::trim(line);

    if (!t.empty() && t[0] == '{') {
        const std::size_t close = t.find('}');
        if (close == std::string::npos) throw ParseError(path, line_no, "unterminated sparse row");
        std::istringstream pairs(t.substr(1, close - 1));
        std::string pair;
        while (std::getline(pairs, pair, ',')) {
            pair = detail::trim(pair);
            if (pair.empty()) continue;
            const std::size_t sp = pair.find_first_of(" \t");
            if (sp == std::string::npos)
                throw ParseError(path, line_no, "sparse entry without a value: '" + pair + "'");
            double idx_d;
            if (!detail::parse_double(pair.substr(0, sp), idx_d) || idx_d < 0)
                throw ParseError(path, line_no, "bad sparse index in '" + pair + "'");
            const std::size_t idx = static_cast<std::size_t>(idx_d);
            if (idx >= n_attr) throw ParseError(path, line_no, "sparse index out of range");
            row[idx] = layout.attributes[idx].decode(detail::trim(pair.substr(sp + 1)), path, line_no);
        }
        return row;
    }

    std::size_t attr = 0;
    std::size_t start = 0;
    while (start <= t.size()) {
        std::size_t comma = t.find(',', start);
        const std::string token =
            detail::trim(comma == std::string::npos ? t.substr(start) : t.substr(start, comma - start));
        if (attr >= n_attr)
            throw ParseError(path, line_no, "too many values (expected " + std::to_string(n_attr) + ")");
        if (token == "?") throw ParseError(path, line_no, "missing value marker '?' not supported");
        row[attr] = layout.attributes[attr].decode(token, path, line_no);
        ++attr;
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (attr != n_attr)
        throw ParseError(path, line_no, "truncated record: expected " + std::to_string(n_attr) +
                                            " values, got " + std::to_string(attr));
    return row;
}

/// Labels must denote 0 or 1. Nominal attributes store the declared index in
/// the parsed row, so map back through the declared value text.
inline std::int8_t decode_label(const Attribute& attr, double raw, const std::string& path,
                                std::size_t line_no) {
    double v = raw;
    if (attr.nominal) {
        const std::size_t idx = static_cast<std::size_t>(raw);
        if (idx >= attr.values.size() || !detail::parse_double(attr.values[idx], v))
            throw ParseError(path, line_no, "label attribute '" + attr.name + "' is not binary");
    }
    if (v == 0.0) return -1;
    if (v == 1.0) return +1;
    throw ParseError(path, line_no, "label value must be 0 or 1");
}

} // namespace arff

/// Min-max feature scaler to [0, 1]; constant features map to 0.
class FeatureScaler {
public:
    void reset(std::size_t n_features) {
        lo_.assign(n_features, std::numeric_limits<double>::infinity());
        hi_.assign(n_features, -std::numeric_limits<double>::infinity());
    }

    bool initialized() const { return !lo_.empty(); }

    void observe(const std::vector<double>& features) {
        for (std::size_t j = 0; j < features.size(); ++j) {
            if (features[j] < lo_[j]) lo_[j] = features[j];
            if (features[j] > hi_[j]) hi_[j] = features[j];
        }
    }

    void observe_row(const Matrix& x, std::size_t i) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            const double v = x(i, j);
            if (v < lo_[j]) lo_[j] = v;
            if (v > hi_[j]) hi_[j] = v;
        }
    }

    double scale(std::size_t j, double v) const {
        const double span = hi_[j] - lo_[j];
        if (!(span > 0.0)) return 0.0;
        return (v - lo_[j]) / span;
    }

    void scale_matrix(Matrix& x) const {
        for (std::size_t i = 0; i < x.rows(); ++i)
            for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) = scale(j, x(i, j));
    }

private:
    std::vector<double> lo_;
    std::vector<double> hi_;
};

namespace detail {

class ArffStream final : public ChunkStream {
public:
    ArffStream(std::string path, arff::LoadOptions opt) : path_(std::move(path)), opt_(opt) {
        std::ifstream probe(path_);
        if (!probe) throw std::runtime_error("cannot open dataset file: " + path_);
        layout_ = arff::parse_layout(probe, path_, opt_);
        scaler_.reset(layout_.header.n_features);

        if (!opt_.streaming_scaling) {
            // first pass: instance count and global feature min/max
            std::string line;
            std::size_t line_no = layout_.data_line;
            std::size_t count = 0;
            std::vector<double> features(layout_.header.n_features);
            while (std::getline(probe, line)) {
                ++line_no;
                const std::string t = detail::trim(line);
                if (t.empty() || t[0] == '%') continue;
                const std::vector<double> row = arff::parse_row(t, layout_, path_, line_no);
                extract_features(row, features);
                scaler_.observe(features);
                ++count;
            }
            layout_.header.n_instances = count;
        }

        data_ = std::make_unique<std::ifstream>(path_);
        std::string line;
        line_no_ = 0;
        while (std::getline(*data_, line)) {
            ++line_no_;
            if (line_no_ == layout_.data_line) break;
        }
    }

    const DatasetHeader& header() const override { return layout_.header; }

    std::optional<Chunk> next() override {
        std::vector<std::vector<double>> rows;
        std::vector<std::size_t> row_lines;
        rows.reserve(opt_.chunk_size);
        std::string line;
        while (rows.size() < opt_.chunk_size && std::getline(*data_, line)) {
            ++line_no_;
            const std::string t = detail::trim(line);
            if (t.empty() || t[0] == '%') continue;
            rows.push_back(arff::parse_row(t, layout_, path_, line_no_));
            row_lines.push_back(line_no_);
        }
        if (rows.empty()) return std::nullopt;

        Chunk chunk;
        chunk.x = Matrix(rows.size(), layout_.header.n_features);
        chunk.labels = LabelObservation(rows.size(), layout_.header.n_labels);
        std::vector<double> features(layout_.header.n_features);
        const std::size_t label_off = layout_.label_offset();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            extract_features(rows[i], features);
            for (std::size_t j = 0; j < features.size(); ++j) chunk.x(i, j) = features[j];
            for (std::size_t j = 0; j < layout_.header.n_labels; ++j)
                chunk.labels.set(i, j,
                                 arff::decode_label(layout_.attributes[label_off + j],
                                                    rows[i][label_off + j], path_, row_lines[i]));
        }
        if (opt_.streaming_scaling)
            for (std::size_t i = 0; i < chunk.x.rows(); ++i) scaler_.observe_row(chunk.x, i);
        scaler_.scale_matrix(chunk.x);
        return chunk;
    }

private:
    void extract_features(const std::vector<double>& row, std::vector<double>& out) const {
        const std::size_t off = layout_.feature_offset();
        for (std::size_t j = 0; j < layout_.header.n_features; ++j) out[j] = row[off + j];
    }

    std::string path_;
    arff::LoadOptions opt_;
    arff::FileLayout layout_;
    FeatureScaler scaler_;
    std::unique_ptr<std::ifstream> data_;
    std::size_t line_no_ = 0;
};

/// Text rows of the form "l1,l2,... i:v i:v ..." where the first token lists
/// positive label indices (omitted when the row starts with an i:v pair).
class SparseStream final : public ChunkStream {
public:
    SparseStream(std::string path, DatasetHeader header, std::size_t chunk_size)
        : path_(std::move(path)), header_(header), chunk_size_(chunk_size) {
        in_ = std::make_unique<std::ifstream>(path_);
        if (!*in_) throw std::runtime_error("cannot open dataset file: " + path_);
        if (header_.n_features == 0 || header_.n_labels == 0)
            throw std::invalid_argument("sparse loader needs feature and label counts");
    }

    const DatasetHeader& header() const override { return header_; }

    std::optional<Chunk> next() override {
        std::vector<std::string> lines;
        std::vector<std::size_t> line_numbers;
        std::string line;
        while (lines.size() < chunk_size_ && std::getline(*in_, line)) {
            ++line_no_;
            const std::string t = detail::trim(line);
            if (t.empty() || t[0] == '#') continue;
            lines.push_back(t);
            line_numbers.push_back(line_no_);
        }
        if (lines.empty()) return std::nullopt;

        Chunk chunk;
        chunk.x = Matrix(lines.size(), header_.n_features);
        chunk.labels = LabelObservation(lines.size(), header_.n_labels);
        for (std::size_t i = 0; i < lines.size(); ++i) parse_line(lines[i], line_numbers[i], chunk, i);
        return chunk;
    }

private:
    void parse_line(const std::string& t, std::size_t line_no, Chunk& chunk, std::size_t row) {
        std::istringstream in(t);
        std::string tok;
        bool first = true;
        std::vector<bool> seen(header_.n_features, false);
        while (in >> tok) {
            const std::size_t colon = tok.find(':');
            if (first && colon == std::string::npos) {
                std::istringstream labels(tok);
                std::string l;
                while (std::getline(labels, l, ',')) {
                    if (l.empty()) continue;
                    double idx;
                    if (!detail::parse_double(l, idx) || idx < 0 ||
                        idx >= static_cast<double>(header_.n_labels))
                        throw ParseError(path_, line_no, "label index out of range: '" + l + "'");
                    chunk.labels.set(row, static_cast<std::size_t>(idx), +1);
                }
                first = false;
                continue;
            }
            first = false;
            if (colon == std::string::npos)
                throw ParseError(path_, line_no, "expected index:value, got '" + tok + "'");
            double idx_d, value;
            if (!detail::parse_double(tok.substr(0, colon), idx_d) || idx_d < 0)
                throw ParseError(path_, line_no, "bad feature index in '" + tok + "'");
            if (!detail::parse_double(tok.substr(colon + 1), value))
                throw ParseError(path_, line_no, "bad feature value in '" + tok + "'");
            const std::size_t idx = static_cast<std::size_t>(idx_d);
            if (idx >= header_.n_features)
                throw ParseError(path_, line_no, "feature index out of range: " + tok);
            if (seen[idx]) throw ParseError(path_, line_no, "duplicate feature index " + std::to_string(idx));
            seen[idx] = true;
            chunk.x(row, idx) = value;
        }
    }

    std::string path_;
    DatasetHeader header_;
    std::size_t chunk_size_;
    std::unique_ptr<std::ifstream> in_;
    std::size_t line_no_ = 0;
};

} // namespace detail

inline std::unique_ptr<ChunkStream> load_arff(const std::string& path,
                                              const arff::LoadOptions& opt = {}) {
    return std::make_unique<detail::ArffStream>(path, opt);
}

inline std::unique_ptr<ChunkStream> load_sparse(const std::string& path, DatasetHeader header,
                                                std::size_t chunk_size) {
    return std::make_unique<detail::SparseStream>(path, header, chunk_size);
}

/// Writers. Doubles are printed with max_digits10 so read-back is exact.

inline void write_sparse_chunk(std::ostream& out, const Chunk& chunk) {
    out.precision(17);
    for (std::size_t i = 0; i < chunk.rows(); ++i) {
        bool first_label = true;
        for (std::size_t j = 0; j < chunk.labels.cols(); ++j) {
            if (chunk.labels(i, j) > 0) {
                out << (first_label ? "" : ",") << j;
                first_label = false;
            }
        }
        for (std::size_t j = 0; j < chunk.x.cols(); ++j) {
            const double v = chunk.x(i, j);
            if (v == 0.0) continue;
            out << ' ' << j << ':' << v;
        }
        out << '\n';
    }
}

/// Multi-label ARFF with the "-C n" relation annotation, labels first.
inline void write_arff_header(std::ostream& out, const DatasetHeader& header) {
    const std::string name = header.name.empty() ? "stream" : header.name;
    out << "@relation '" << name << ": -C " << header.n_labels << "'\n\n";
    for (std::size_t j = 0; j < header.n_labels; ++j)
        out << "@attribute label" << j << " {0,1}\n";
    for (std::size_t j = 0; j < header.n_features; ++j)
        out << "@attribute x" << j << " numeric\n";
    out << "\n@data\n";
}

inline void write_arff_chunk(std::ostream& out, const Chunk& chunk) {
    out.precision(17);
    for (std::size_t i = 0; i < chunk.rows(); ++i) {
        for (std::size_t j = 0; j < chunk.labels.cols(); ++j)
            out << (chunk.labels(i, j) > 0 ? 1 : 0) << ',';
        for (std::size_t j = 0; j < chunk.x.cols(); ++j) {
            out << chunk.x(i, j);
            out << (j + 1 == chunk.x.cols() ? "" : ",");
        }
        out << '\n';
    }
}

inline void export_arff(std::ostream& out, ChunkStream& stream) {
    write_arff_header(out, stream.header());
    while (auto chunk = stream.next()) write_arff_chunk(out, *chunk);
}

} // namespace mlbels
