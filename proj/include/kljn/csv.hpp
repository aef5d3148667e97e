#pragma once
// Small CSV writer: shortest-round-trip doubles (std::to_chars), so output
// is byte-stable and parses back exactly.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace kljn::csv {

std::string format_double(double v);

class Writer {
  public:
    explicit Writer(const std::filesystem::path& path);

    void header(const std::vector<std::string>& columns);

    Writer& field(double v);
    Writer& field(std::size_t v);
    Writer& field(std::int64_t v);
    Writer& field(const std::string& v);
    void end_row();

  private:
    std::ofstream out_;
    bool row_started_ = false;

    void sep();
};

}  // namespace kljn::csv
