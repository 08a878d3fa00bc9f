#include "imslab/params_file.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace imslab {

DelayParams parse_params(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("parameter file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("parameter file must hold a JSON object");
    }
    for (const auto& [key, _] : doc.items()) {
        if (!is_delay_field(key)) {
            throw ConfigError("unknown key '" + key + "' in parameter file");
        }
    }

    DelayParams params;
    auto read = [&](std::string_view name) -> std::optional<Millis> {
        const auto it = doc.find(std::string(name));
        if (it == doc.end()) {
            return std::nullopt;
        }
        if (!it->is_number()) {
            throw ConfigError("parameter " + std::string(name) + " must be a number");
        }
        return it->get<double>();
    };

    for (const auto& field : delay_fields()) {
        if (auto v = read(field.name)) {
            params.*field.member = *v;
            continue;
        }
        if (field.name != "t_nar" && field.name != "t_np" && field.name != "t_par") {
            throw ConfigError("parameter file is missing " + std::string(field.name));
        }
    }
    // Symmetric completions for the optional fields.
    if (!doc.contains("t_nar")) {
        params.t_nar = params.t_oar;
    }
    if (!doc.contains("t_np")) {
        params.t_np = params.t_op;
    }
    if (!doc.contains("t_par")) {
        params.t_par = kDefaultParDelay;
    }
    params.validate();
    return params;
}

DelayParams load_params(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open parameter file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_params(buf.str());
}

std::string dump_params(const DelayParams& params) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    for (const auto& field : delay_fields()) {
        doc[std::string(field.name)] = params.*field.member;
    }
    return doc.dump(2) + "\n";
}

} // namespace imslab
