#pragma once

#include "gpebo/observer.hpp"
#include "gpebo/runner.hpp"

#include <string>
#include <vector>

namespace gpebo {

// Columns: t,u,y,x1..xn,xhat1..xhatn,thetahat1..thetahatr,theta1..thetar,
// err_x1..err_xn,err_th1..err_thr. Shortest round-trip number formatting,
// so repeated runs are byte-identical.
void write_run_csv(const std::string& path, const RunLog& log, const EstimateLog& est,
                   const std::vector<double>& theta_true);

// Columns: t,z,psi1..psir.
void write_regression_csv(const std::string& path, const RunLog& log);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<double> data; // row-major

    std::size_t rows() const { return columns.empty() ? 0 : data.size() / columns.size(); }
    // Index of a named column; throws error naming the column when absent.
    std::size_t col(const std::string& name) const;
    double at(std::size_t row, std::size_t column) const {
        return data[row * columns.size() + column];
    }
};

CsvTable read_csv(const std::string& path); // rejects empty or ragged files

} // namespace gpebo
