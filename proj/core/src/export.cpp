#include "cift/export.hpp"

#include <fstream>

#include "json.hpp"

namespace cift::exporter {
namespace {

using nlohmann::ordered_json;

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
    std::string quoted = "\"";
    for (char c : value) {
        quoted += c;
        if (c == '"') quoted += '"';
    }
    quoted += '"';
    return quoted;
}

// "YYYY-MM-DD" -> "MM/DD/YYYY" (l2t_csv date layout).
std::string csv_date(const std::string& iso) {
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return iso;
    return iso.substr(5, 2) + "/" + iso.substr(8, 2) + "/" + iso.substr(0, 4);
}

std::string field(const evidence::CaseDatabase::Row& row, std::string_view name) {
    for (const auto& [column, value] : row) {
        if (column == name) return value;
    }
    return "";
}

const char* kTimelineSelect =
    "SELECT source_id, date, time, timezone, MACB, source, sourcetype, type, user, host, "
    "short, \"desc\", filename, notes, format, extra, client_only "
    "FROM TIMELINE ORDER BY date, time, source_id, rowid";

}  // namespace

const char* const kL2tCsvHeader =
    "date,time,timezone,MACB,source,sourcetype,type,user,host,short,desc,version,filename,"
    "inode,notes,format,extra";

Result<std::int64_t> export_l2t_csv(const evidence::CaseDatabase& casedb,
                                    const std::filesystem::path& out_path) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        return Result<std::int64_t>::failure(ErrorKind::Io, "cannot write " + out_path.string());
    out << kL2tCsvHeader << "\n";
    std::int64_t rows = 0;
    for (const auto& row : casedb.query(kTimelineSelect)) {
        const std::string time = field(row, "time");
        // "HH:MM:SS.mmm": seconds go in the time column, milliseconds into
        // extra, so nothing is lost in the fixed l2t layout.
        std::string seconds = time;
        std::string millis = "000";
        const auto dot = time.find('.');
        if (dot != std::string::npos) {
            seconds = time.substr(0, dot);
            millis = time.substr(dot + 1);
        }
        std::string extra = field(row, "extra");
        if (!extra.empty()) extra += " ";
        extra += "ms=" + millis;

        const std::string fields[17] = {
            csv_date(field(row, "date")),
            seconds,
            field(row, "timezone"),
            field(row, "MACB"),
            field(row, "source"),
            field(row, "sourcetype"),
            field(row, "type"),
            field(row, "user"),
            field(row, "host"),
            field(row, "short"),
            field(row, "desc"),
            "2",
            field(row, "filename"),
            "",
            field(row, "notes"),
            field(row, "format"),
            extra,
        };
        for (int i = 0; i < 17; ++i) {
            if (i) out << ',';
            out << csv_field(fields[i]);
        }
        out << "\n";
        ++rows;
    }
    out.flush();
    if (!out)
        return Result<std::int64_t>::failure(ErrorKind::Io, "write failed: " + out_path.string());
    return rows;
}

Result<std::int64_t> export_jsonl(const evidence::CaseDatabase& casedb,
                                  const std::filesystem::path& out_path) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        return Result<std::int64_t>::failure(ErrorKind::Io, "cannot write " + out_path.string());
    std::int64_t rows = 0;

    for (const auto& row : casedb.query(kTimelineSelect)) {
        ordered_json line;
        line["table"] = "TIMELINE";
        for (const auto& [column, value] : row) {
            if (column == "client_only") {
                line[column] = value == "1";
            } else if (column == "source_id") {
                line[column] = std::stoll(value);
            } else {
                line[column] = value;
            }
        }
        out << line.dump() << "\n";
        ++rows;
    }

    static const char* const kContentTables[] = {"ACCOUNT",      "ALEXA_DEVICE", "SETTING_WIFI",
                                                 "SETTING_MISC", "SKILL",        "COMPATIBLE_DEVICE"};
    for (const char* table : kContentTables) {
        for (const auto& row : casedb.query(std::string("SELECT * FROM ") + table + " ORDER BY rowid")) {
            ordered_json line;
            line["table"] = table;
            for (const auto& [column, value] : row) {
                if (column == "source_id") {
                    line[column] = value.empty() ? 0 : std::stoll(value);
                } else {
                    line[column] = value;
                }
            }
            out << line.dump() << "\n";
            ++rows;
        }
    }
    out.flush();
    if (!out)
        return Result<std::int64_t>::failure(ErrorKind::Io, "write failed: " + out_path.string());
    return rows;
}

}  // namespace cift::exporter
