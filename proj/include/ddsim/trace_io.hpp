#ifndef DDSIM_TRACE_IO_HPP
#define DDSIM_TRACE_IO_HPP

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ddsim/errors.hpp"
#include "ddsim/flow.hpp"
#include "ddsim/fsio.hpp"

namespace ddsim {

inline constexpr const char* kRecordsCsvHeader = "timestamp_ms,flow_id,bytes,packets";
inline constexpr const char* kWindowsCsvHeader =
    "window_index,window_end_ms,volume_bytes,flow_count";
inline constexpr const char* kWindowsCsvHeaderLabeled =
    "window_index,window_end_ms,volume_bytes,flow_count,is_attack_truth";

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

inline std::int64_t parse_int(const std::string& field, std::size_t line,
                              const char* what) {
    std::int64_t value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || field.empty()) {
        throw RejectedRecordError(line, std::string("cannot parse ") + what + " '" +
                                            field + "'");
    }
    return value;
}

inline std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace detail

/**
 * Read a trace CSV (`timestamp_ms,flow_id,bytes,packets`). The header line is
 * mandatory and must match exactly. Records are validated and sorted by
 * (timestamp, flow_id), so the result is directly usable by window_partition.
 */
inline std::vector<FlowRecord> read_records_csv(std::istream& in,
                                                const std::string& source = "<stream>") {
    std::string line;
    if (!std::getline(in, line)) {
        throw SchemaError(source + ": empty trace file (missing header)");
    }
    if (detail::strip_cr(line) != kRecordsCsvHeader) {
        throw SchemaError(source + ": bad header, expected '" +
                          std::string(kRecordsCsvHeader) + "'");
    }
    std::vector<FlowRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != 4) {
            throw RejectedRecordError(line_no, "expected 4 fields, got " +
                                                   std::to_string(fields.size()));
        }
        FlowRecord rec;
        rec.timestamp_ms = detail::parse_int(fields[0], line_no, "timestamp_ms");
        rec.flow_id = fields[1];
        rec.bytes = detail::parse_int(fields[2], line_no, "bytes");
        rec.packets = detail::parse_int(fields[3], line_no, "packets");
        validate_record(rec, line_no);
        records.push_back(std::move(rec));
    }
    std::sort(records.begin(), records.end(), record_less);
    return records;
}

inline std::vector<FlowRecord> read_records_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open trace file: " + path.string());
    return read_records_csv(in, path.string());
}

inline void write_records_csv(std::ostream& out, std::span<const FlowRecord> records) {
    out << kRecordsCsvHeader << '\n';
    for (const FlowRecord& rec : records) {
        out << rec.timestamp_ms << ',' << rec.flow_id << ',' << rec.bytes << ','
            << rec.packets << '\n';
    }
}

inline void write_records_csv_file(const std::filesystem::path& path,
                                   std::span<const FlowRecord> records) {
    std::ostringstream ss;
    write_records_csv(ss, records);
    write_file_atomic(path, ss.str());
}

/// Windowed stats plus the optional ground-truth column of labeled traces.
struct WindowTable {
    std::vector<WindowStats> windows;
    std::optional<std::vector<std::uint8_t>> truth;
    std::int64_t delta_ms = 0;
};

/**
 * Read a windowed-stats CSV. Windows come back without per-flow maps (the
 * file does not carry them); measures hold the standard [volume, flow] pair.
 * delta_ms is recovered from the index/end columns and checked per row.
 */
inline WindowTable read_windows_csv(std::istream& in,
                                    const std::string& source = "<stream>") {
    std::string line;
    if (!std::getline(in, line)) {
        throw SchemaError(source + ": empty windows file (missing header)");
    }
    line = detail::strip_cr(line);
    bool labeled;
    if (line == kWindowsCsvHeaderLabeled) {
        labeled = true;
    } else if (line == kWindowsCsvHeader) {
        labeled = false;
    } else {
        throw SchemaError(source + ": bad header, expected '" +
                          std::string(kWindowsCsvHeader) + "[,is_attack_truth]'");
    }

    WindowTable table;
    if (labeled) table.truth.emplace();
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != (labeled ? 5u : 4u)) {
            throw SchemaError(source + ": line " + std::to_string(line_no) +
                              ": wrong field count");
        }
        WindowStats w;
        w.window_index =
            static_cast<std::uint64_t>(detail::parse_int(fields[0], line_no, "window_index"));
        w.window_end_ms = detail::parse_int(fields[1], line_no, "window_end_ms");
        w.volume_bytes =
            static_cast<std::uint64_t>(detail::parse_int(fields[2], line_no, "volume_bytes"));
        w.flow_count =
            static_cast<std::uint64_t>(detail::parse_int(fields[3], line_no, "flow_count"));
        w.measures = {static_cast<double>(w.volume_bytes),
                      static_cast<double>(w.flow_count)};

        const std::uint64_t expected = table.windows.size() + 1;
        if (w.window_index != expected) {
            throw SchemaError(source + ": line " + std::to_string(line_no) +
                              ": window_index " + std::to_string(w.window_index) +
                              " out of sequence (expected " + std::to_string(expected) + ")");
        }
        if (table.windows.empty()) {
            if (w.window_end_ms <= 0) {
                throw SchemaError(source + ": first window_end_ms must be positive");
            }
            table.delta_ms = w.window_end_ms;
        }
        if (w.window_end_ms != static_cast<std::int64_t>(w.window_index) * table.delta_ms) {
            throw SchemaError(source + ": line " + std::to_string(line_no) +
                              ": window_end_ms inconsistent with delta " +
                              std::to_string(table.delta_ms));
        }
        if (labeled) {
            const std::int64_t t = detail::parse_int(fields[4], line_no, "is_attack_truth");
            if (t != 0 && t != 1) {
                throw SchemaError(source + ": line " + std::to_string(line_no) +
                                  ": is_attack_truth must be 0 or 1");
            }
            table.truth->push_back(static_cast<std::uint8_t>(t));
        }
        table.windows.push_back(std::move(w));
    }
    return table;
}

inline WindowTable read_windows_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open windows file: " + path.string());
    return read_windows_csv(in, path.string());
}

/// Emit windowed stats; the truth column is written only for labeled traces.
inline void write_windows_csv(std::ostream& out, std::span<const WindowStats> windows,
                              const std::vector<std::uint8_t>* truth = nullptr) {
    if (truth != nullptr && truth->size() != windows.size()) {
        throw SchemaError("truth column length does not match window count");
    }
    out << (truth ? kWindowsCsvHeaderLabeled : kWindowsCsvHeader) << '\n';
    for (std::size_t i = 0; i < windows.size(); ++i) {
        const WindowStats& w = windows[i];
        out << w.window_index << ',' << w.window_end_ms << ',' << w.volume_bytes << ','
            << w.flow_count;
        if (truth) out << ',' << static_cast<int>((*truth)[i]);
        out << '\n';
    }
}

inline void write_windows_csv_file(const std::filesystem::path& path,
                                   std::span<const WindowStats> windows,
                                   const std::vector<std::uint8_t>* truth = nullptr) {
    std::ostringstream ss;
    write_windows_csv(ss, windows, truth);
    write_file_atomic(path, ss.str());
}

}  // namespace ddsim

#endif  // DDSIM_TRACE_IO_HPP
