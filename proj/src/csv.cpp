#include "frbd/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace frbd {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end)
        throw std::invalid_argument("parse_double: bad number '" + s + "'");
    return v;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_csv(const std::filesystem::path& path, const Trajectory& traj,
               const std::vector<std::string>& columns) {
    if (columns.empty()) throw std::invalid_argument("write_csv: empty column list");
    std::vector<const std::vector<double>*> data;
    data.reserve(columns.size());
    for (const auto& name : columns)
        data.push_back(name == "t" ? &traj.t : &traj.channel(name));

    std::string out;
    out.reserve(64 * (traj.size() + 1));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c) out += ',';
        out += columns[c];
    }
    out += '\n';
    for (std::size_t k = 0; k < traj.size(); ++k) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out += ',';
            out += format_double((*data[c])[k]);
        }
        out += '\n';
    }
    write_text_atomic(path, out);
}

bool CsvTable::has(const std::string& name) const {
    for (const auto& h : header)
        if (h == name) return true;
    return false;
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return columns[i];
    throw std::invalid_argument("CsvTable: missing column '" + name + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) table.header.push_back(cell);
    table.columns.resize(table.header.size());

    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::size_t c = 0;
        while (std::getline(ls, cell, ',')) {
            if (c >= table.header.size())
                throw std::runtime_error(path.string() + ": too many cells in row " +
                                         std::to_string(row));
            table.columns[c++].push_back(parse_double(cell));
        }
        if (c != table.header.size())
            throw std::runtime_error(path.string() + ": short row " + std::to_string(row));
    }
    return table;
}

void write_report(const std::filesystem::path& path,
                  const std::vector<std::pair<std::string, std::string>>& entries) {
    std::string out;
    for (const auto& [key, value] : entries) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    }
    write_text_atomic(path, out);
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace frbd
