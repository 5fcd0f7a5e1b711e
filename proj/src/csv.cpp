#include "drivewave/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace drivewave {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string snapshots_csv(std::span<const FieldState> snapshots, const Grid1D& grid) {
    std::string out = "t,x,u1,u2\n";
    for (const FieldState& st : snapshots) {
        const std::string t = format_double(st.t);
        for (std::size_t i = 0; i < st.u1.size(); ++i) {
            out += t;
            out += ',';
            out += format_double(grid.x(i));
            out += ',';
            out += format_double(st.u1[i]);
            out += ',';
            if (!st.u2.empty()) out += format_double(st.u2[i]);
            out += '\n';
        }
    }
    return out;
}

std::string report_csv(const WaveReport& rep, double s, double r) {
    std::ostringstream os;
    os << "s,r,speed,fit_r2,class,p_monotone,n_monotone,plateau_n\n"
       << format_double(s) << ',' << format_double(r) << ',' << format_double(rep.speed) << ','
       << format_double(rep.fit_r2) << ',' << to_string(rep.wave_class) << ',' << format_bool(rep.p_monotone)
       << ',' << format_bool(rep.n_monotone) << ',' << format_double(rep.plateau_n) << '\n';
    return os.str();
}

std::string h_table_csv(const HTable& table) {
    std::string out = "V,h\n";
    for (std::size_t k = 0; k < table.V.size(); ++k)
        out += format_double(table.V[k]) + ',' + format_double(table.h[k]) + '\n';
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r' && c != '\n') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace drivewave
