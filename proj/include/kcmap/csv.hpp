#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace kcmap {

/// Reader for the comma-separated inputs: double-quote escaping with doubled
/// quotes, quoted fields may embed commas and newlines, header row required.
/// Lines starting with '#' outside a quoted field are skipped, so emitted
/// files with a manifest comment line can be read back.
class CsvReader {
public:
    explicit CsvReader(const std::filesystem::path& path);

    /// Parses from an in-memory buffer; `name` labels error messages.
    CsvReader(std::string buffer, std::string name);

    const std::vector<std::string>& header() const { return header_; }
    std::optional<std::size_t> column(std::string_view name) const;
    /// Throws ValidationError naming the file and the column.
    std::size_t require_column(std::string_view name) const;

    struct Row {
        std::vector<std::string> fields;
        std::size_t line_no = 0; // 1-based line the row starts on
    };

    /// Returns false at end of input. Rows shorter than the header are an
    /// error; unquoted fields are trimmed.
    bool next(Row& row);

    const std::string& name() const { return name_; }

private:
    bool parse_record(std::vector<std::string>& fields, std::size_t& line_no);

    std::string buffer_;
    std::string name_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::vector<std::string> header_;
};

/// Writes rows with minimal quoting. Callers format numeric fields
/// themselves. The path constructor owns its stream; movable, not copyable.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(&out) {}
    /// Throws ComputationError when the file cannot be created.
    explicit CsvWriter(const std::filesystem::path& path);

    void comment(std::string_view text);
    void row(const std::vector<std::string>& fields);

private:
    std::unique_ptr<std::ostream> owned_;
    std::ostream* out_;
};

} // namespace kcmap
