#pragma once

#include <string>
#include <vector>

#include "omit/sweep.hpp"

namespace omit {

// Shortest decimal string that round-trips the double exactly.
std::string format_double(double value);

// Spectrum rows: delta_p_rad_s,nu_rad_s,eta,re_da_plus,im_da_plus,
// re_da_minus,im_da_minus. Switch rows carry a leading d_m column.
std::string spectrum_csv(const std::vector<SweepRow>& rows);
std::string switch_csv(const std::vector<SweepRow>& rows);

struct OracleRow {
    double nu = 0.0;
    double delta_p = 0.0;
    double eta_analytic = 0.0;
    double eta_oracle = 0.0;
};

// Columns: nu_rad_s,delta_p_rad_s,eta_analytic,eta_oracle,abs_diff.
std::string oracle_csv(const std::vector<OracleRow>& rows);

} // namespace omit
