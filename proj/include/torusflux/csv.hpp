#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "torusflux/error.hpp"

namespace torusflux {

/// Minimal CSV emitter: fixed header, rows of numeric or string cells,
/// full double precision.
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

    CsvWriter& cell(double v) {
        std::ostringstream ss;
        ss << std::setprecision(17) << v;
        row_.push_back(ss.str());
        return *this;
    }

    CsvWriter& cell(int v) {
        row_.push_back(std::to_string(v));
        return *this;
    }

    CsvWriter& cell(const std::string& v) {
        row_.push_back(v);
        return *this;
    }

    void end_row() {
        if (row_.size() != header_.size())
            throw validation_error("csv-shape", "row width does not match the header");
        rows_.push_back(row_);
        row_.clear();
    }

    std::string str() const {
        std::ostringstream out;
        write(out);
        return out.str();
    }

    void write(std::ostream& os) const {
        for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << header_[i];
        os << "\n";
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
            os << "\n";
        }
    }

    void save(const std::string& path) const {
        std::ofstream os(path);
        if (!os) throw io_error("file-open-failed", path);
        write(os);
    }

  private:
    std::vector<std::string> header_;
    std::vector<std::string> row_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace torusflux
