#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "specprobe/eigensolve.hpp"
#include "specprobe/probe.hpp"
#include "specprobe/wkb.hpp"

namespace specprobe {

/// Decimal text with 17 significant digits (round-trips through strtod).
std::string format_real(double x);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws ArgumentError if absent.
    std::size_t column(const std::string& name) const;
    double number(std::size_t row, const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Writers emit the header unless `append` adds rows to an existing file.

/// n,l,lambda,nodes,f_at_1,fprime_at_1
void write_spectrum_csv(const SpectrumTable& table, const std::filesystem::path& path, bool append = false);

/// n,l,lambda,T,X,Z,action,bs_residual,absC,allowed_a,allowed_b
void write_wkb_csv(const Channel& channel, const std::vector<WkbSummary>& rows,
                   const std::filesystem::path& path, bool append = false);

/// n,l,lambda,tau,j,k,reG,imG,absG,predicted_abs,isolation
void write_probe_csv(const Channel& channel, const std::vector<ProbePoint>& rows,
                     const std::filesystem::path& path, bool append = false);

}  // namespace specprobe
