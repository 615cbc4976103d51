#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ctk/contourlet.hpp"
#include "ctk/image.hpp"

namespace ctk {

/// One typed report cell. std::monostate renders as an empty CSV cell / JSON null.
using StudyValue = std::variant<std::monostate, double, long long, std::string, bool>;

/// Ordered named columns; every row of a study shares the schema of its first row.
using StudyRow = std::vector<std::pair<std::string, StudyValue>>;

enum class ReportFormat { Csv, Json };

/// Rain/clean pairs matched by filename stem under two directories.
struct PairedDataset {
    std::vector<std::pair<std::filesystem::path, std::filesystem::path>> pairs;
    size_t count() const { return pairs.size(); }
};

/// Pairs sorted by stem; stems present in only one directory are skipped with
/// a warning on stderr.
PairedDataset load_paired_dataset(const std::filesystem::path& rain_dir,
                                  const std::filesystem::path& clean_dir);

/// Per pair and per level l <= max_level: MSE and SSIM between the two bottom
/// semantic subbands, plus per-level aggregate means. SSIM is skipped (with a
/// flag) once the SS is smaller than the 11x11 window; the level loop stops
/// with a warning row once the SS cannot shrink further.
std::vector<StudyRow> run_level_study(const PairedDataset& ds, int max_level, const CtConfig& cfg);

/// Rain-streak retrieval comparison: SSIM of the rain mask against every
/// min-max-normalized level-1 CT direction subband (plus the best
/// two-subband sum), the three Haar detail bands (nearest-upsampled), and the
/// gaussian high band.
std::vector<StudyRow> run_extraction_compare(const ImageTensor& clean, const ImageTensor& rain,
                                             const ImageTensor& mask, const CtConfig& cfg,
                                             double hl_sigma);

/// CSV (RFC-4180 quoting) or JSON array of objects; numbers are printed with
/// 9 significant digits.
void emit_report(const std::vector<StudyRow>& rows, const std::filesystem::path& path,
                 ReportFormat format);

std::string render_report(const std::vector<StudyRow>& rows, ReportFormat format);

} // namespace ctk
