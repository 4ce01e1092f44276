#include "export.hpp"

#include "pmfht/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pmfht::cli {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_order(double a) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", a);
    return buf;
}

std::string file_content_hash(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError(path.string() + ": cannot open for hashing");
    std::uint64_t h = 0xcbf29ce484222325ull;
    char chunk[8192];
    while (in.read(chunk, sizeof(chunk)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(chunk[i]);
            h *= 0x100000001b3ull;
        }
        if (!in)
            break;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError(path.string() + ": cannot open for writing");
    out << body;
    if (!out)
        throw InputError(path.string() + ": write failed");
}

void write_spectrum_csv(const std::filesystem::path& path, const Eigen::VectorXd& lambdas,
                        const Eigen::VectorXcd& coeffs) {
    std::ostringstream out;
    out << "mode_index,lambda,coeff_real,coeff_imag\n";
    for (Eigen::Index m = 0; m < coeffs.size(); ++m)
        out << m << ',' << format_double(lambdas[m]) << ',' << format_double(coeffs[m].real())
            << ',' << format_double(coeffs[m].imag()) << '\n';
    write_text_file(path, out.str());
}

void write_lambda_csv(const std::filesystem::path& path, const Eigen::VectorXd& lambdas) {
    std::ostringstream out;
    out << "mode_index,lambda\n";
    for (Eigen::Index m = 0; m < lambdas.size(); ++m)
        out << m << ',' << format_double(lambdas[m]) << '\n';
    write_text_file(path, out.str());
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

std::string series_color(std::size_t k) {
    static const char* palette[] = {"#d62728", "#2ca02c", "#1f77b4", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    return palette[k % (sizeof(palette) / sizeof(palette[0]))];
}

void write_stem_svg(const std::filesystem::path& path, const std::string& title,
                    const std::string& y_label, const std::vector<StemSeries>& series) {
    if (series.empty())
        throw ConfigError("stem plot: no series given");
    const Eigen::Index n = series.front().values.size();
    for (const StemSeries& s : series)
        if (s.values.size() != n)
            throw ConfigError("stem plot: series lengths differ");

    double lo = 0.0, hi = 0.0;
    for (const StemSeries& s : series) {
        lo = std::min(lo, s.values.minCoeff());
        hi = std::max(hi, s.values.maxCoeff());
    }
    if (hi == lo)
        hi = lo + 1.0;
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    const double width = 960, height = 540;
    const double ml = 72, mr = 24, mt = 46, mb = 52;
    const double pw = width - ml - mr, ph = height - mt - mb;
    const auto sx = [&](double mode) {
        return ml + (n > 1 ? mode / static_cast<double>(n - 1) : 0.5) * pw;
    };
    const auto sy = [&](double v) { return mt + (hi - v) / (hi - lo) * ph; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

    // Axes with 6 ticks each.
    out << "<g stroke=\"#333\" stroke-width=\"1\">\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
        << mt + ph << "\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
        << "\"/>\n";
    out << "</g>\n";
    out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    for (int k = 0; k <= 5; ++k) {
        const double mode = (n - 1) * k / 5.0;
        out << "<line x1=\"" << fmt(sx(mode)) << "\" y1=\"" << mt + ph << "\" x2=\""
            << fmt(sx(mode)) << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << fmt(sx(mode)) << "\" y=\"" << mt + ph + 18
            << "\" text-anchor=\"middle\">" << fmt(std::round(mode)) << "</text>\n";
        const double v = lo + (hi - lo) * k / 5.0;
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << fmt(sy(v)) << "\" x2=\"" << ml
            << "\" y2=\"" << fmt(sy(v)) << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << fmt(sy(v) + 4)
            << "\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
    }
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 14
        << "\" text-anchor=\"middle\" font-size=\"13\">mode index</text>\n";
    out << "<text x=\"18\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
        << mt + ph / 2 << ")\">" << y_label << "</text>\n";
    out << "</g>\n";

    // Zero baseline if it lies inside the range.
    if (lo < 0.0 && hi > 0.0)
        out << "<line x1=\"" << ml << "\" y1=\"" << fmt(sy(0)) << "\" x2=\"" << ml + pw
            << "\" y2=\"" << fmt(sy(0)) << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";

    const double base = std::clamp(0.0, lo, hi);
    for (std::size_t s = 0; s < series.size(); ++s) {
        out << "<g stroke=\"" << series[s].color << "\" fill=\"" << series[s].color
            << "\" stroke-width=\"1\" opacity=\"0.75\">\n";
        for (Eigen::Index m = 0; m < n; ++m) {
            const double x = sx(static_cast<double>(m));
            const double y = sy(series[s].values[m]);
            out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(sy(base)) << "\" x2=\"" << fmt(x)
                << "\" y2=\"" << fmt(y) << "\"/>"
                << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"1.8\"/>\n";
        }
        out << "</g>\n";
    }

    for (std::size_t s = 0; s < series.size(); ++s) {
        const double lx = ml + pw - 90, ly = mt + 10 + 18 * static_cast<double>(s);
        out << "<rect x=\"" << lx << "\" y=\"" << ly - 9 << "\" width=\"12\" height=\"12\" fill=\""
            << series[s].color << "\"/>\n";
        out << "<text x=\"" << lx + 18 << "\" y=\"" << ly + 2
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[s].name
            << "</text>\n";
    }
    out << "</svg>\n";
    write_text_file(path, out.str());
}

namespace {

std::array<std::uint8_t, 3> lerp_rgb(const double a[3], const double b[3], double t) {
    const auto ch = [&](int k) {
        return static_cast<std::uint8_t>(std::lround(255.0 * ((1.0 - t) * a[k] + t * b[k])));
    };
    return {ch(0), ch(1), ch(2)};
}

} // namespace

std::array<std::uint8_t, 3> colormap(const std::string& name, double t) {
    t = std::clamp(t, 0.0, 1.0);
    if (name == "gray") {
        const double k[3] = {0, 0, 0}, w[3] = {1, 1, 1};
        return lerp_rgb(k, w, t);
    }
    if (name == "viridis") {
        static const double anchors[][3] = {
            {0.267, 0.005, 0.329}, {0.283, 0.141, 0.458}, {0.254, 0.265, 0.530},
            {0.207, 0.372, 0.553}, {0.164, 0.471, 0.558}, {0.128, 0.567, 0.551},
            {0.135, 0.659, 0.518}, {0.267, 0.749, 0.441}, {0.478, 0.821, 0.318},
            {0.741, 0.873, 0.150}, {0.993, 0.906, 0.144}};
        const double pos = t * 10.0;
        const int k = std::min(9, static_cast<int>(pos));
        return lerp_rgb(anchors[k], anchors[k + 1], pos - k);
    }
    if (name == "bwr") {
        const double b[3] = {0.230, 0.299, 0.754}, w[3] = {0.95, 0.95, 0.95},
                     r[3] = {0.706, 0.016, 0.150};
        return t < 0.5 ? lerp_rgb(b, w, 2.0 * t) : lerp_rgb(w, r, 2.0 * t - 1.0);
    }
    throw ConfigError("unknown colormap '" + name + "' (choose bwr, gray, or viridis)");
}

std::vector<std::array<std::uint8_t, 3>> colorize(const Eigen::VectorXd& values,
                                                  const std::string& map_name) {
    const double lo = values.minCoeff(), hi = values.maxCoeff();
    std::vector<std::array<std::uint8_t, 3>> colors(static_cast<std::size_t>(values.size()));
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        const double t = hi > lo ? (values[i] - lo) / (hi - lo) : 0.5;
        colors[static_cast<std::size_t>(i)] = colormap(map_name, t);
    }
    return colors;
}

void write_matrix_market(const std::filesystem::path& path,
                         const Eigen::SparseMatrix<double>& m) {
    std::ostringstream out;
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
    for (int k = 0; k < m.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
            out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << format_double(it.value())
                << '\n';
    write_text_file(path, out.str());
}

void write_matrix_market_diagonal(const std::filesystem::path& path,
                                  const Eigen::VectorXd& diag) {
    std::ostringstream out;
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << diag.size() << ' ' << diag.size() << ' ' << diag.size() << '\n';
    for (Eigen::Index i = 0; i < diag.size(); ++i)
        out << i + 1 << ' ' << i + 1 << ' ' << format_double(diag[i]) << '\n';
    write_text_file(path, out.str());
}

} // namespace pmfht::cli
