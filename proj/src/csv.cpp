#include "kcmap/csv.hpp"

#include "kcmap/errors.hpp"
#include "kcmap/text.hpp"

#include <fstream>
#include <sstream>

namespace kcmap {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

CsvReader::CsvReader(const std::filesystem::path& path)
    : CsvReader(read_file(path), path.string()) {}

CsvReader::CsvReader(std::string buffer, std::string name)
    : buffer_(std::move(buffer)), name_(std::move(name)) {
    std::size_t line_no = 0;
    if (!parse_record(header_, line_no)) {
        throw ValidationError(name_ + ": missing header row");
    }
}

std::optional<std::size_t> CsvReader::column(std::string_view name) const {
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (header_[i] == name) return i;
    }
    return std::nullopt;
}

std::size_t CsvReader::require_column(std::string_view name) const {
    if (auto idx = column(name)) return *idx;
    throw ValidationError(name_ + ": missing required column '" + std::string(name) + "'");
}

bool CsvReader::next(Row& row) {
    if (!parse_record(row.fields, row.line_no)) return false;
    if (row.fields.size() < header_.size()) {
        throw ValidationError(name_ + " line " + std::to_string(row.line_no) + ": expected " +
                              std::to_string(header_.size()) + " fields, got " +
                              std::to_string(row.fields.size()));
    }
    return true;
}

bool CsvReader::parse_record(std::vector<std::string>& fields, std::size_t& line_no) {
    // Skip blank lines and comment lines.
    while (pos_ < buffer_.size()) {
        if (buffer_[pos_] == '\n') {
            ++pos_;
            ++line_;
        } else if (buffer_[pos_] == '\r' && pos_ + 1 < buffer_.size() && buffer_[pos_ + 1] == '\n') {
            pos_ += 2;
            ++line_;
        } else if (buffer_[pos_] == '#') {
            while (pos_ < buffer_.size() && buffer_[pos_] != '\n') ++pos_;
        } else {
            break;
        }
    }
    if (pos_ >= buffer_.size()) return false;

    fields.clear();
    line_no = line_;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (;;) {
        if (pos_ >= buffer_.size()) {
            if (quoted) {
                throw ValidationError(name_ + " line " + std::to_string(line_no) +
                                      ": unterminated quoted field");
            }
            fields.push_back(was_quoted ? field : trim(field));
            return true;
        }
        char c = buffer_[pos_];
        if (quoted) {
            if (c == '"') {
                if (pos_ + 1 < buffer_.size() && buffer_[pos_ + 1] == '"') {
                    field.push_back('"');
                    pos_ += 2;
                } else {
                    quoted = false;
                    ++pos_;
                }
            } else {
                if (c == '\n') ++line_;
                field.push_back(c);
                ++pos_;
            }
            continue;
        }
        switch (c) {
        case '"':
            quoted = true;
            was_quoted = true;
            ++pos_;
            break;
        case ',':
            fields.push_back(was_quoted ? field : trim(field));
            field.clear();
            was_quoted = false;
            ++pos_;
            break;
        case '\r':
            if (pos_ + 1 < buffer_.size() && buffer_[pos_ + 1] == '\n') {
                fields.push_back(was_quoted ? field : trim(field));
                pos_ += 2;
                ++line_;
                return true;
            }
            field.push_back(c);
            ++pos_;
            break;
        case '\n':
            fields.push_back(was_quoted ? field : trim(field));
            ++pos_;
            ++line_;
            return true;
        default:
            field.push_back(c);
            ++pos_;
            break;
        }
    }
}

CsvWriter::CsvWriter(const std::filesystem::path& path)
    : owned_(std::make_unique<std::ofstream>(path, std::ios::binary)), out_(owned_.get()) {
    if (!*out_) throw ComputationError("cannot write " + path.string());
}

void CsvWriter::comment(std::string_view text) {
    *out_ << "# " << text << "\n";
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) *out_ << ',';
        const std::string& f = fields[i];
        bool needs_quotes = f.find_first_of(",\"\n\r") != std::string::npos ||
                            (!f.empty() && (f.front() == ' ' || f.back() == ' ')) ||
                            (!f.empty() && f.front() == '#' && i == 0);
        if (needs_quotes) {
            *out_ << '"';
            for (char c : f) {
                if (c == '"') *out_ << '"';
                *out_ << c;
            }
            *out_ << '"';
        } else {
            *out_ << f;
        }
    }
    *out_ << '\n';
}

} // namespace kcmap
