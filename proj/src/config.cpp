#include "vrs/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "vrs/errors.hpp"

namespace vrs {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos)
        return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream stream(s);
    std::string item;
    while (std::getline(stream, item, sep))
        out.push_back(trim(item));
    return out;
}

// Key-value lines with line numbers for diagnostics.
std::map<std::string, std::pair<std::string, int>> parse_lines(const std::string& text) {
    std::map<std::string, std::pair<std::string, int>> entries;
    std::stringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": empty key or value");
        if (entries.count(key))
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": duplicate key '" + key + "'");
        entries[key] = {value, line_no};
    }
    return entries;
}

struct EntryReader {
    std::map<std::string, std::pair<std::string, int>> entries;

    std::optional<std::string> take(const std::string& key) {
        auto it = entries.find(key);
        if (it == entries.end())
            return std::nullopt;
        std::string value = it->second.first;
        entries.erase(it);
        return value;
    }

    double take_double(const std::string& key, double fallback) {
        auto raw = take(key);
        if (!raw)
            return fallback;
        try {
            std::size_t used = 0;
            const double v = std::stod(*raw, &used);
            if (used != raw->size())
                throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw ValidationError("config field '" + key + "': cannot parse '" + *raw +
                                  "' as a number");
        }
    }

    long take_long(const std::string& key, long fallback) {
        const double v = take_double(key, static_cast<double>(fallback));
        const long out = std::lround(v);
        if (static_cast<double>(out) != v)
            throw ValidationError("config field '" + key + "': expected an integer");
        return out;
    }

    void finish(const char* what) const {
        if (!entries.empty()) {
            const auto& [key, value] = *entries.begin();
            throw ValidationError(std::string(what) + " line " +
                                  std::to_string(value.second) + ": unknown key '" +
                                  key + "'");
        }
    }
};

std::string format_double(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

} // namespace

void RunConfig::validate() const {
    params.validate();
    if (n_modes < 1)
        throw ValidationError("bath.n_modes must be >= 1");
    if (!(omega_max > 0.0))
        throw ValidationError("bath.omega_max must be > 0");
    if (multiplicity < 1)
        throw ValidationError("ansatz.multiplicity must be >= 1");
    if (noise_scale < 0.0)
        throw ValidationError("ansatz.noise_scale must be >= 0");
    if (!(dt > 0.0))
        throw ValidationError("integrator.dt must be > 0");
    if (!(t_f > 0.0))
        throw ValidationError("integrator.t_f must be > 0");
    if (regularization_eps < 0.0)
        throw ValidationError("integrator.eps must be >= 0");
    if (output_stride < 1)
        throw ValidationError("integrator.output_stride must be >= 1");
    if (snapshot_times.size() > 10)
        throw ValidationError("integrator.snapshot_times: at most 10 checkpoints");
    if (!(grid_max > 0.0))
        throw ValidationError("spectrum.grid_max must be > 0");
    if (grid_points < 2)
        throw ValidationError("spectrum.grid_points must be >= 2");
    if (methods.empty())
        throw ValidationError("methods must name at least one of multid1,trwa,rwa");
}

std::string RunConfig::to_text() const {
    std::ostringstream out;
    out << "model.omega0 = " << format_double(params.omega0) << '\n';
    out << "model.omega_c = " << format_double(params.omega_c) << '\n';
    out << "model.lambda_c = " << format_double(params.lambda_c) << '\n';
    out << "model.alpha = " << format_double(params.alpha) << '\n';
    out << "model.omega_cut = " << format_double(params.omega_cut) << '\n';
    out << "bath.n_modes = " << n_modes << '\n';
    out << "bath.omega_max = " << format_double(omega_max) << '\n';
    out << "ansatz.multiplicity = " << multiplicity << '\n';
    out << "ansatz.noise_scale = " << format_double(noise_scale) << '\n';
    out << "ansatz.seed = " << seed << '\n';
    out << "integrator.dt = " << format_double(dt) << '\n';
    out << "integrator.t_f = " << format_double(t_f) << '\n';
    out << "integrator.eps = " << format_double(regularization_eps) << '\n';
    out << "integrator.output_stride = " << output_stride << '\n';
    if (!snapshot_times.empty()) {
        out << "integrator.snapshot_times = ";
        for (std::size_t i = 0; i < snapshot_times.size(); ++i)
            out << (i ? "," : "") << format_double(snapshot_times[i]);
        out << '\n';
    }
    out << "spectrum.grid_max = " << format_double(grid_max) << '\n';
    out << "spectrum.grid_points = " << grid_points << '\n';
    out << "methods = ";
    bool first = true;
    for (const auto method : methods) {
        out << (first ? "" : ",") << to_string(method);
        first = false;
    }
    out << '\n';
    return out.str();
}

RunConfig parse_config_text(const std::string& text) {
    EntryReader reader{parse_lines(text)};
    RunConfig config;

    config.params.omega0 = reader.take_double("model.omega0", config.params.omega0);
    config.params.omega_c = reader.take_double("model.omega_c", config.params.omega_c);
    config.params.lambda_c =
        reader.take_double("model.lambda_c", config.params.lambda_c);
    config.params.alpha = reader.take_double("model.alpha", config.params.alpha);
    config.params.omega_cut =
        reader.take_double("model.omega_cut", config.params.omega_cut);

    config.n_modes = static_cast<std::size_t>(
        reader.take_long("bath.n_modes", static_cast<long>(config.n_modes)));
    config.omega_max = reader.take_double("bath.omega_max", config.omega_max);

    config.multiplicity = reader.take_long("ansatz.multiplicity", config.multiplicity);
    config.noise_scale = reader.take_double("ansatz.noise_scale", config.noise_scale);
    config.seed = static_cast<std::uint64_t>(
        reader.take_long("ansatz.seed", static_cast<long>(config.seed)));

    config.dt = reader.take_double("integrator.dt", config.dt);
    config.t_f = reader.take_double("integrator.t_f", config.t_f);
    config.regularization_eps =
        reader.take_double("integrator.eps", config.regularization_eps);
    config.output_stride = static_cast<int>(
        reader.take_long("integrator.output_stride", config.output_stride));
    if (auto raw = reader.take("integrator.snapshot_times")) {
        config.snapshot_times.clear();
        for (const auto& item : split(*raw, ','))
            if (!item.empty())
                config.snapshot_times.push_back(std::stod(item));
    }

    config.grid_max = reader.take_double("spectrum.grid_max", config.grid_max);
    config.grid_points =
        static_cast<int>(reader.take_long("spectrum.grid_points", config.grid_points));

    if (auto raw = reader.take("methods")) {
        config.methods.clear();
        for (const auto& item : split(*raw, ',')) {
            if (item == "multid1")
                config.methods.insert(SpectrumMethod::multid1);
            else if (item == "trwa")
                config.methods.insert(SpectrumMethod::trwa);
            else if (item == "rwa")
                config.methods.insert(SpectrumMethod::rwa);
            else
                throw ValidationError("config field 'methods': unknown method '" +
                                      item + "'");
        }
    }
    if (auto raw = reader.take("output.dir"))
        config.output_dir = *raw;

    reader.finish("config");
    config.validate();
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

void SweepSpec::validate() const {
    if (lambda_c_values.empty() || alpha_values.empty())
        throw ValidationError("sweep: value lists must be non-empty");
    for (const auto& [point, m] : multiplicity_overrides) {
        const bool known =
            std::count(lambda_c_values.begin(), lambda_c_values.end(), point.first) &&
            std::count(alpha_values.begin(), alpha_values.end(), point.second);
        if (!known)
            throw ValidationError("sweep: multiplicity override references an "
                                  "unlisted point");
        if (m < 1)
            throw ValidationError("sweep: multiplicity override must be >= 1");
    }
}

SweepSpec parse_sweep_text(const std::string& text) {
    EntryReader reader{parse_lines(text)};
    SweepSpec spec;
    if (auto raw = reader.take("sweep.lambda_c"))
        for (const auto& item : split(*raw, ','))
            spec.lambda_c_values.push_back(std::stod(item));
    if (auto raw = reader.take("sweep.alpha"))
        for (const auto& item : split(*raw, ','))
            spec.alpha_values.push_back(std::stod(item));
    if (auto raw = reader.take("sweep.multiplicity")) {
        // Triples lambda_c:alpha:M separated by commas.
        for (const auto& item : split(*raw, ',')) {
            const auto parts = split(item, ':');
            if (parts.size() != 3)
                throw ValidationError("sweep.multiplicity: expected "
                                      "lambda_c:alpha:M triples");
            spec.multiplicity_overrides[{std::stod(parts[0]), std::stod(parts[1])}] =
                std::stol(parts[2]);
        }
    }
    reader.finish("sweep");
    spec.validate();
    return spec;
}

SweepSpec load_sweep(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open sweep file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_sweep_text(buffer.str());
}

} // namespace vrs
