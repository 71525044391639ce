#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "lyapspec/common.hpp"

namespace lyapspec {

// CSV with a header row and %.17g floats: outputs round-trip losslessly and
// byte-identically across runs.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header)
        : out_(path) {
        if (!out_) throw SchemaError("cannot open output file: " + path);
        for (std::size_t i = 0; i < header.size(); ++i)
            out_ << (i ? "," : "") << header[i];
        out_ << "\n";
    }

    class Row {
    public:
        explicit Row(std::ofstream& out) : out_(out) {}
        Row& col(double v) {
            sep();
            out_ << format_double(v);
            return *this;
        }
        Row& col(int v) {
            sep();
            out_ << v;
            return *this;
        }
        Row& col(long long v) {
            sep();
            out_ << v;
            return *this;
        }
        Row& col(const std::string& v) {
            sep();
            out_ << v;
            return *this;
        }
        ~Row() { out_ << "\n"; }

    private:
        void sep() {
            if (!first_) out_ << ",";
            first_ = false;
        }
        std::ofstream& out_;
        bool first_ = true;
    };

    Row row() { return Row(out_); }

private:
    std::ofstream out_;
};

}  // namespace lyapspec
