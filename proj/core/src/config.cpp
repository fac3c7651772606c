#include "plausigen/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "plausigen/errors.hpp"

namespace plausigen {

namespace {

struct KeyBinding {
    const char* name;
    double GenerationConfig::* dfield;
    int GenerationConfig::* ifield;
};

const KeyBinding kBindings[] = {
    {"epsilon_height", &GenerationConfig::epsilon_height, nullptr},
    {"retry_budget", nullptr, &GenerationConfig::retry_budget},
    {"size_up_probability", &GenerationConfig::size_up_probability, nullptr},
    {"co_loc_radius", &GenerationConfig::co_loc_radius, nullptr},
    {"target_dist_small", &GenerationConfig::target_dist_small, nullptr},
    {"target_dist_medium", &GenerationConfig::target_dist_medium, nullptr},
    {"target_dist_large", &GenerationConfig::target_dist_large, nullptr},
    {"contact_tolerance", &GenerationConfig::contact_tolerance, nullptr},
    {"drop_grid", nullptr, &GenerationConfig::drop_grid},
    {"camera_fov_deg", &GenerationConfig::camera_fov_deg, nullptr},
    {"v_min", &GenerationConfig::v_min, nullptr},
    {"n_min", nullptr, &GenerationConfig::n_min},
    {"o_max", &GenerationConfig::o_max, nullptr},
    {"n_iter", nullptr, &GenerationConfig::n_iter},
    {"step_fraction", &GenerationConfig::step_fraction, nullptr},
    {"camera_box_half_x", &GenerationConfig::camera_box_half_x, nullptr},
    {"camera_box_half_y", &GenerationConfig::camera_box_half_y, nullptr},
    {"camera_box_z_min", &GenerationConfig::camera_box_z_min, nullptr},
    {"camera_box_z_max", &GenerationConfig::camera_box_z_max, nullptr},
    {"image_size", nullptr, &GenerationConfig::image_size},
    {"transforms_per_camera", nullptr, &GenerationConfig::transforms_per_camera},
};

}  // namespace

void apply_config_key(GenerationConfig& config, const std::string& key, double value) {
    for (const KeyBinding& b : kBindings) {
        if (key == b.name) {
            if (b.dfield)
                config.*(b.dfield) = value;
            else
                config.*(b.ifield) = static_cast<int>(std::llround(value));
            return;
        }
    }
    throw SchemaError("unknown config key '" + key + "'");
}

GenerationConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open config file: " + path);
    GenerationConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        if (line.front() == '[') continue;  // section header, cosmetic only

        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw SchemaError(path + ":" + std::to_string(line_no) +
                              ": expected 'key = value'");
        auto trim = [](std::string s) {
            size_t b = s.find_first_not_of(" \t");
            size_t e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value_str = trim(line.substr(eq + 1));
        double value = 0.0;
        try {
            size_t used = 0;
            value = std::stod(value_str, &used);
            if (used != value_str.size()) throw std::invalid_argument(value_str);
        } catch (const std::exception&) {
            throw SchemaError(path + ":" + std::to_string(line_no) +
                              ": value for '" + key + "' is not a number");
        }
        apply_config_key(config, key, value);
    }
    config.validate();
    return config;
}

void GenerationConfig::validate() const {
    auto fail = [](const std::string& msg) { throw SchemaError("config: " + msg); };
    if (epsilon_height < 0) fail("epsilon_height must be >= 0");
    if (retry_budget < 1) fail("retry_budget must be >= 1");
    if (size_up_probability < 0 || size_up_probability > 1)
        fail("size_up_probability must be in [0, 1]");
    if (co_loc_radius <= 0) fail("co_loc_radius must be > 0");
    double sum = target_dist_small + target_dist_medium + target_dist_large;
    if (target_dist_small < 0 || target_dist_medium < 0 || target_dist_large < 0 ||
        std::abs(sum - 1.0) > 1e-9)
        fail("target size distribution must be nonnegative and sum to 1");
    if (contact_tolerance <= 0) fail("contact_tolerance must be > 0");
    if (drop_grid < 1) fail("drop_grid must be >= 1");
    if (camera_fov_deg <= 10.0 || camera_fov_deg >= 120.0)
        fail("camera_fov_deg must be in (10, 120)");
    if (v_min < 0 || v_min > 1) fail("v_min must be in [0, 1]");
    if (n_min < 0) fail("n_min must be >= 0");
    if (o_max < 0 || o_max > 1) fail("o_max must be in [0, 1]");
    if (n_iter < 1) fail("n_iter must be >= 1");
    if (step_fraction <= 0) fail("step_fraction must be > 0");
    if (camera_box_z_min <= 0 || camera_box_z_max <= camera_box_z_min)
        fail("camera sampling box must sit strictly above the centroid");
    if (image_size < 16) fail("image_size must be >= 16");
    if (transforms_per_camera < 1) fail("transforms_per_camera must be >= 1");
}

std::map<std::string, double> GenerationConfig::as_map() const {
    std::map<std::string, double> out;
    for (const KeyBinding& b : kBindings)
        out[b.name] = b.dfield ? this->*(b.dfield) : static_cast<double>(this->*(b.ifield));
    return out;
}

}  // namespace plausigen
