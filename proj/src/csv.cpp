#include "omit/csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace omit {

std::string format_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    (void)ec;
    return std::string(buffer, ptr);
}

namespace {

void append_response_columns(std::ostringstream& os, const SweepRow& row) {
    os << format_double(row.delta_p) << ',' << format_double(row.nu) << ','
       << format_double(row.eta) << ',' << format_double(row.da_plus.real()) << ','
       << format_double(row.da_plus.imag()) << ','
       << format_double(row.da_minus.real()) << ','
       << format_double(row.da_minus.imag()) << '\n';
}

} // namespace

std::string spectrum_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "delta_p_rad_s,nu_rad_s,eta,re_da_plus,im_da_plus,re_da_minus,"
          "im_da_minus\n";
    for (const auto& row : rows) append_response_columns(os, row);
    return os.str();
}

std::string switch_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "d_m,delta_p_rad_s,nu_rad_s,eta,re_da_plus,im_da_plus,re_da_minus,"
          "im_da_minus\n";
    for (const auto& row : rows) {
        os << format_double(row.d) << ',';
        append_response_columns(os, row);
    }
    return os.str();
}

std::string oracle_csv(const std::vector<OracleRow>& rows) {
    std::ostringstream os;
    os << "nu_rad_s,delta_p_rad_s,eta_analytic,eta_oracle,abs_diff\n";
    for (const auto& row : rows) {
        os << format_double(row.nu) << ',' << format_double(row.delta_p) << ','
           << format_double(row.eta_analytic) << ','
           << format_double(row.eta_oracle) << ','
           << format_double(std::abs(row.eta_analytic - row.eta_oracle)) << '\n';
    }
    return os.str();
}

} // namespace omit
