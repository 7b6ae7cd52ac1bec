#pragma once

// JSON scene configs for the command-line driver. Parsing is strict:
// every object carries an allowed-key list and anything else is rejected,
// so a typo fails loudly instead of silently running a default.

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "geoweb/dual.hpp"
#include "geoweb/geodesic.hpp"
#include "geoweb/metric.hpp"
#include "geoweb/ode.hpp"

namespace geoweb {

// The surface an experiment runs on: a Liouville chart with expression
// coefficients, or the cubic-law surface picked by a sign.
struct SurfaceSpec {
    enum class Type { Liouville, Epsilon };
    Type type = Type::Liouville;

    std::string a, b;                       // coefficient expressions in u and v
    Chart chart{0, 1, 0, 1, std::nullopt};  // Liouville chart bounds
    int epsilon = 1;                        // surface sign for the epsilon type
    double z_min = 1e-6;

    LiouvilleMetric metric() const;  // rejects the epsilon type
    EpsSurface eps_surface() const;  // rejects the Liouville type
};

struct WallSpec {
    Axis axis = Axis::U;
    double value = 0;
    int side = -1;
    bool mirror = false;
};

struct BilliardExperiment {
    WallSpec wall;
    int bounces = 100;
    bool random_start = false;  // foot point and angle drawn from the CLI seed
    double foot = 0;            // launch coordinate along the wall
    double angle_deg = 45;      // angle off the wall tangent, in (0, 90)
    int sign = 1;               // tangential direction along the wall
};

struct WebCheckExperiment {
    std::string web = "liouville";  // liouville | perturbed | rebisected
    double delta = 0;               // net perturbation for the control webs
    int nx = 50, ny = 50;
    std::optional<std::array<double, 4>> box;  // x0, x1, y0, y1
    double margin = 0.3;  // chart inset used when no box is given
};

struct PonceletExperiment {
    Eigen::Vector4d c_I = Eigen::Vector4d::Zero();
    Eigen::Vector4d c_w = Eigen::Vector4d::Zero();
    std::vector<double> starts;
    int steps = 500;
    int orient = 0;
    int closure_period = 0;  // 0 skips the closure report
};

struct CausticsExperiment {
    WallSpec wall;
    std::vector<double> mu;
};

struct RenderExperiment {
    std::string picture;   // plane | chart | web
    std::string artifact;  // bounce JSONL for the plane and chart pictures
    std::optional<WallSpec> wall;
};

using Experiment = std::variant<BilliardExperiment, WebCheckExperiment, PonceletExperiment,
                                CausticsExperiment, RenderExperiment>;

struct SceneConfig {
    SurfaceSpec surface;
    Experiment experiment;
    OdeOptions ode;
    std::optional<std::string> out;
};

// Parse a config document; origin names the source in error messages.
SceneConfig parse_scene_config(const std::string& text, const std::string& origin);

// Read and parse a config file; a missing file reports "file not found".
SceneConfig load_scene_config(const std::string& path);

} // namespace geoweb
