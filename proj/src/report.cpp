#include "histq/report.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <sstream>

#include "histq/errors.hpp"

namespace histq {

using nlohmann::json;

std::filesystem::path find_report(const std::filesystem::path& out_dir,
                                  const std::string& task) {
    if (!std::filesystem::is_directory(out_dir))
        throw NotFound("no run artifacts at " + out_dir.string());
    const bool numeric = !task.empty() && std::all_of(task.begin(), task.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
    });
    std::vector<std::filesystem::path> candidates;
    for (const auto& entry : std::filesystem::directory_iterator(out_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("task_", 0) != 0 || entry.path().extension() != ".json") continue;
        if (numeric && name.rfind("task_" + task + "_", 0) == 0) return entry.path();
        if (!numeric && name.find("_" + task + ".json") != std::string::npos)
            candidates.push_back(entry.path());
    }
    if (candidates.empty()) throw NotFound("no report for task '" + task + "'");
    std::sort(candidates.begin(), candidates.end());
    return candidates.front();
}

namespace {

std::string complex_str(const json& pair) {
    std::ostringstream os;
    os << std::showpos << std::fixed << std::setprecision(6) << pair[0].get<double>()
       << pair[1].get<double>() << "i";
    return os.str();
}

void render_consistency(const json& rep, std::ostringstream& os) {
    const auto& matrix = rep.at("matrix");
    const auto& labels = rep.at("labels");
    os << "decoherence matrix:\n";
    std::size_t label_w = 0;
    for (const auto& l : labels) label_w = std::max(label_w, l.get<std::string>().size());
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        os << "  " << std::setw(static_cast<int>(label_w)) << labels[i].get<std::string>()
           << " |";
        for (const auto& entry : matrix[i]) os << " " << std::setw(20) << complex_str(entry);
        os << "\n";
    }
    os << "consistent: " << (rep.at("consistent").get<bool>() ? "true" : "false") << "\n";
    os << "max_offdiag_re: " << rep.at("max_offdiag_re").get<double>() << "\n";
    os << "probabilities:";
    for (const auto& p : rep.at("probabilities")) os << " " << p.get<double>();
    os << "\n";
    os << "prob_sum_error: " << rep.at("prob_sum_error").get<double>() << "\n";
    os << "tolerance: " << rep.at("tolerance").get<double>() << "\n";
}

void render_flat(const json& rep, std::ostringstream& os) {
    std::size_t key_w = 0;
    for (const auto& [key, value] : rep.items())
        if (value.is_primitive()) key_w = std::max(key_w, key.size());
    for (const auto& [key, value] : rep.items()) {
        if (key == "index" || key == "kind") continue;
        if (value.is_primitive()) {
            os << "  " << std::left << std::setw(static_cast<int>(key_w) + 1) << (key + ":")
               << " " << value.dump() << "\n";
        } else if (value.is_array() && key == "rows") {
            os << "  rows: " << value.size() << "\n";
        }
    }
}

}  // namespace

std::string render_text(const json& rep) {
    std::ostringstream os;
    os.precision(12);
    const std::string kind = rep.value("kind", "?");
    os << "task " << rep.value("index", 0) << " (" << kind << ")\n";
    if (kind == "consistency") {
        render_consistency(rep, os);
    } else {
        render_flat(rep, os);
        if (rep.contains("passed"))
            os << "verdict: " << (rep.at("passed").get<bool>() ? "PASS" : "FAIL") << "\n";
    }
    return os.str();
}

}  // namespace histq
