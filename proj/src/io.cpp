#include "vrs/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vrs/errors.hpp"

namespace vrs {

std::string format_double(double value) {
    char buffer[40];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ValidationError("cannot open " + path.string() + " for writing");
    out << content;
}

void write_spectrum_csv(const std::filesystem::path& path,
                        const SpectrumResult& spectrum) {
    std::ostringstream out;
    out << "omega,N\n";
    for (std::size_t i = 0; i < spectrum.frequencies.size(); ++i)
        out << format_double(spectrum.frequencies[i]) << ','
            << format_double(spectrum.values[i]) << '\n';
    write_text_file(path, out.str());

    nlohmann::json meta;
    for (const auto& [key, value] : spectrum.metadata)
        meta[key] = value;
    std::filesystem::path meta_path = path;
    meta_path += ".meta.json";
    write_text_file(meta_path, meta.dump(2) + "\n");
}

SpectrumResult read_spectrum_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open " + path.string());
    SpectrumResult spectrum;
    std::string line;
    if (!std::getline(in, line) || line.rfind("omega,N", 0) != 0)
        throw ValidationError(path.string() + ": expected 'omega,N' header");
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ValidationError(path.string() + ": malformed row '" + line + "'");
        spectrum.frequencies.push_back(std::stod(line.substr(0, comma)));
        spectrum.values.push_back(std::stod(line.substr(comma + 1)));
    }

    std::filesystem::path meta_path = path;
    meta_path += ".meta.json";
    if (std::filesystem::exists(meta_path)) {
        const nlohmann::json meta = nlohmann::json::parse(read_text_file(meta_path));
        for (const auto& [key, value] : meta.items())
            spectrum.metadata[key] = value.get<std::string>();
        const auto method = spectrum.metadata.find("method");
        if (method != spectrum.metadata.end()) {
            if (method->second == "multid1")
                spectrum.method = SpectrumMethod::multid1;
            else if (method->second == "rwa")
                spectrum.method = SpectrumMethod::rwa;
            else
                spectrum.method = SpectrumMethod::trwa;
        }
    }
    return spectrum;
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const TrajectoryRecord& record) {
    std::ostringstream out;
    out << "t,norm,energy,sigma_x,sigma_y,sigma_z,parity,sigma2\n";
    for (std::size_t i = 0; i < record.times.size(); ++i) {
        const ObservableSet& obs = record.observables[i];
        out << format_double(record.times[i]) << ',' << format_double(obs.norm) << ','
            << format_double(obs.energy) << ',' << format_double(obs.sigma_x) << ','
            << format_double(obs.sigma_y) << ',' << format_double(obs.sigma_z) << ','
            << format_double(obs.parity) << ',' << format_double(record.sigma2[i])
            << '\n';
    }
    write_text_file(path, out.str());
}

void write_peaks_csv(const std::filesystem::path& path,
                     const std::vector<std::pair<std::string, std::vector<Peak>>>& reports) {
    std::ostringstream out;
    out << "source,peak_index,position,height,fwhm,fwhm_complete\n";
    for (const auto& [name, peaks] : reports) {
        for (std::size_t i = 0; i < peaks.size(); ++i) {
            const Peak& p = peaks[i];
            out << name << ',' << i << ',' << format_double(p.position) << ','
                << format_double(p.height) << ',' << format_double(p.fwhm) << ','
                << (p.fwhm_complete ? 1 : 0) << '\n';
        }
    }
    write_text_file(path, out.str());
}

} // namespace vrs
