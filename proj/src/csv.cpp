#include "kljn/csv.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

namespace kljn::csv {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    if (res.ec != std::errc()) throw std::runtime_error("format_double failed");
    return std::string(buf, res.ptr);
}

Writer::Writer(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    out_.open(path, std::ios::binary);
    if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
}

void Writer::header(const std::vector<std::string>& columns) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i > 0) out_ << ',';
        out_ << columns[i];
    }
    out_ << '\n';
}

void Writer::sep() {
    if (row_started_) out_ << ',';
    row_started_ = true;
}

Writer& Writer::field(double v) {
    sep();
    out_ << format_double(v);
    return *this;
}

Writer& Writer::field(std::size_t v) {
    sep();
    out_ << v;
    return *this;
}

Writer& Writer::field(std::int64_t v) {
    sep();
    out_ << v;
    return *this;
}

Writer& Writer::field(const std::string& v) {
    sep();
    out_ << v;
    return *this;
}

void Writer::end_row() {
    out_ << '\n';
    row_started_ = false;
}

}  // namespace kljn::csv
