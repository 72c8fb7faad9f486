#include <algorithm>
#include <cmath>
#include <filesystem>

#include "hessmetric/error.hpp"
#include "hessmetric/harness.hpp"
#include "hessmetric/io.hpp"

namespace hessmetric::harness {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string optional_number(const std::optional<double>& x) { return x ? io::format_double(*x) : std::string(); }

nlohmann::json optional_json(const std::optional<double>& x) {
    if (!x || !std::isfinite(*x)) return nullptr;
    return *x;
}

}  // namespace

const char* status_name(Status s) {
    switch (s) {
        case Status::Pass: return "PASS";
        case Status::Fail: return "FAIL";
        case Status::Info: return "INFO";
    }
    return "INFO";
}

void Table::add(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double x : values) cells.push_back(io::format_double(x));
    add(std::move(cells));
}

void Table::add(std::vector<std::string> cells) {
    if (cells.size() != columns.size())
        fail(ErrorCode::Internal, "table '" + name + "' row has " + std::to_string(cells.size()) + " cells, expected " +
                                      std::to_string(columns.size()));
    rows.push_back(std::move(cells));
}

void Report::compare(const std::string& quantity, const std::string& inputs, double expected, double actual,
                     double tol, const std::string& provenance) {
    double err = std::abs(actual - expected);
    if (expected != 0.0) err /= std::abs(expected);
    bool ok = std::isfinite(actual) && err <= tol;
    rows_.push_back({quantity, inputs, expected, actual, err, tol, provenance, ok ? Status::Pass : Status::Fail});
}

void Report::at_most(const std::string& quantity, const std::string& inputs, double actual, double limit,
                     const std::string& provenance) {
    bool ok = actual <= limit;
    rows_.push_back({quantity, inputs, std::nullopt, actual, std::nullopt, limit, provenance,
                     ok ? Status::Pass : Status::Fail});
}

void Report::require(const std::string& quantity, const std::string& inputs, bool ok, double actual,
                     std::optional<double> tolerance, const std::string& provenance) {
    rows_.push_back({quantity, inputs, std::nullopt, actual, std::nullopt, tolerance, provenance,
                     ok ? Status::Pass : Status::Fail});
}

void Report::info(const std::string& quantity, const std::string& inputs, double actual,
                  const std::string& provenance) {
    rows_.push_back({quantity, inputs, std::nullopt, actual, std::nullopt, std::nullopt, provenance, Status::Info});
}

Table& Report::table(const std::string& name, std::vector<std::string> columns) {
    for (auto& t : tables_)
        if (t.name == name) return t;
    tables_.push_back({name, std::move(columns), {}});
    return tables_.back();
}

void Report::append(const Report& other) {
    rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
    for (const auto& t : other.tables_) {
        Table* mine = &table(t.name, t.columns);
        // Same name, different shape: keep the incoming table apart under its report's name.
        if (mine->columns != t.columns) mine = &table(other.name_ + "_" + t.name, t.columns);
        if (mine->columns != t.columns) fail(ErrorCode::Internal, "table '" + t.name + "' merged with other columns");
        mine->rows.insert(mine->rows.end(), t.rows.begin(), t.rows.end());
    }
}

bool Report::all_pass() const { return failures() == 0; }

std::size_t Report::failures() const {
    return static_cast<std::size_t>(
        std::count_if(rows_.begin(), rows_.end(), [](const CheckRow& r) { return r.status == Status::Fail; }));
}

std::string checks_to_csv(const Report& report) {
    std::string out = "quantity,inputs,expected,actual,rel_err,provenance,pass,tolerance\n";
    for (const auto& r : report.rows()) {
        out += csv_field(r.quantity) + "," + csv_field(r.inputs) + "," + optional_number(r.expected) + "," +
               io::format_double(r.actual) + "," + optional_number(r.rel_err) + "," + csv_field(r.provenance) + "," +
               status_name(r.status) + "," + optional_number(r.tolerance) + "\n";
    }
    return out;
}

std::string table_to_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + csv_field(table.columns[i]);
    out += "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(row[i]);
        out += "\n";
    }
    return out;
}

nlohmann::json report_to_json(const Report& report) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& r : report.rows()) {
        checks.push_back({{"quantity", r.quantity},
                          {"inputs", r.inputs},
                          {"expected", optional_json(r.expected)},
                          {"actual", std::isfinite(r.actual) ? nlohmann::json(r.actual) : nlohmann::json(nullptr)},
                          {"rel_err", optional_json(r.rel_err)},
                          {"provenance", r.provenance},
                          {"pass", status_name(r.status)},
                          {"tolerance", optional_json(r.tolerance)}});
    }
    nlohmann::json tables = nlohmann::json::object();
    for (const auto& t : report.tables()) tables[t.name] = {{"columns", t.columns}, {"rows", t.rows}};
    return {{"report", report.name()}, {"all_pass", report.all_pass()}, {"checks", checks}, {"tables", tables}};
}

Format parse_format(const std::string& text) {
    if (text == "csv") return Format::Csv;
    if (text == "json") return Format::Json;
    fail(ErrorCode::Usage, "unknown format '" + text + "' (expected csv or json)");
}

std::vector<std::string> write_report(const Report& report, const std::string& out_dir, Format format) {
    std::filesystem::path dir(out_dir.empty() ? "." : out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) fail(ErrorCode::InvalidArgument, "cannot create output directory '" + dir.string() + "': " + ec.message());
    std::vector<std::string> written;
    if (format == Format::Json) {
        std::string path = (dir / (report.name() + ".json")).string();
        io::write_file_atomic(path, report_to_json(report).dump(2) + "\n");
        written.push_back(path);
        return written;
    }
    std::string path = (dir / (report.name() + ".csv")).string();
    io::write_file_atomic(path, checks_to_csv(report));
    written.push_back(path);
    for (const auto& t : report.tables()) {
        std::string tpath = (dir / (report.name() + "_" + t.name + ".csv")).string();
        io::write_file_atomic(tpath, table_to_csv(t));
        written.push_back(tpath);
    }
    return written;
}

RadialProfile random_profile(std::mt19937_64& rng, core::Coordinate coord, int max_pieces) {
    std::uniform_int_distribution<int> count(1, std::max(1, max_pieces));
    std::uniform_real_distribution<double> location(-3.0, -0.1);
    std::uniform_real_distribution<double> increment(0.1, 1.5);
    int k = count(rng);
    std::vector<double> bps;
    while (static_cast<int>(bps.size()) < k) {
        double x = location(rng);
        bool spaced = std::all_of(bps.begin(), bps.end(), [x](double y) { return std::abs(x - y) >= 0.05; });
        if (spaced) bps.push_back(x);
    }
    std::sort(bps.begin(), bps.end());
    std::vector<double> slopes{0.0};
    for (int i = 0; i < k; ++i) slopes.push_back(slopes.back() + increment(rng));
    return core::make_profile(std::move(bps), std::move(slopes), coord);
}

}  // namespace hessmetric::harness
