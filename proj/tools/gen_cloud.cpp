#include "pmfht/errors.hpp"
#include "pmfht/ply_io.hpp"
#include "pmfht/synth.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"synthetic point cloud generator"};

    std::string shape = "sphere";
    std::string out;
    std::string format = "ascii";
    int n = 500;
    double spacing = 1.0;
    double noise = 0.0;
    std::uint64_t seed = 0;

    app.add_option("--shape", shape, "sphere, random-sphere, blob, grid, circle, or line")
        ->capture_default_str()
        ->check(CLI::IsMember({"sphere", "random-sphere", "blob", "grid", "circle", "line"}));
    app.add_option("--n", n, "point count (grid uses the nearest square)")
        ->capture_default_str()
        ->check(CLI::Range(4, 1 << 24));
    app.add_option("--out", out, "output PLY path")->required();
    app.add_option("--spacing", spacing, "grid/line spacing")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--noise", noise, "Gaussian coordinate noise sigma")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    app.add_option("--seed", seed, "seed for random-sphere and noise")->capture_default_str();
    app.add_option("--format", format, "PLY format")
        ->capture_default_str()
        ->check(CLI::IsMember({"ascii", "binary"}));

    CLI11_PARSE(app, argc, argv);

    try {
        pmfht::PointCloud cloud;
        if (shape == "sphere") {
            cloud = pmfht::synth::fibonacci_sphere(n);
        } else if (shape == "random-sphere") {
            cloud = pmfht::synth::random_sphere(n, seed);
        } else if (shape == "blob") {
            cloud = pmfht::synth::blob(n);
        } else if (shape == "grid") {
            const int side = std::max(2, static_cast<int>(std::lround(std::sqrt(n))));
            cloud = pmfht::synth::grid(side, side, spacing);
        } else if (shape == "circle") {
            cloud = pmfht::synth::circle(n);
        } else {
            cloud = pmfht::synth::line(n, spacing);
        }
        if (noise > 0.0)
            cloud = pmfht::synth::add_noise(std::move(cloud), noise, seed);

        pmfht::write_ply(cloud, out,
                         format == "binary" ? pmfht::PlyFormat::binary_little_endian
                                            : pmfht::PlyFormat::ascii);
        std::printf("wrote %lld points to %s\n", static_cast<long long>(cloud.size()),
                    out.c_str());
        return 0;
    } catch (const pmfht::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
