#include "pite/io.hpp"

#include "pite/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace pite {

namespace {

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& tok, const std::string& path, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw config_error(path + ":" + std::to_string(line_no) + ": not a number: '" + tok +
                           "'");
    }
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(strip(tok));
    return out;
}

void normalize(std::vector<double>& w, const std::string& path) {
    double sum = 0.0;
    for (double x : w) {
        if (!(x >= 0.0)) throw config_error(path + ": negative weight " + std::to_string(x));
        sum += x;
    }
    if (!(sum > 0.0)) throw config_error(path + ": weights sum to zero");
    for (double& x : w) x /= sum;
}

} // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

SpectrumFile read_spectrum_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open spectrum file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw config_error(path + ": empty file");
    if (strip(line) != "index,eigenvalue,weight")
        throw config_error(path + ": expected header 'index,eigenvalue,weight', got '" +
                           strip(line) + "'");
    SpectrumFile out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (strip(line).empty()) continue;
        const auto toks = split_csv(line);
        if (toks.size() != 3)
            throw config_error(path + ":" + std::to_string(line_no) + ": expected 3 columns, got " +
                               std::to_string(toks.size()));
        parse_number(toks[0], path, line_no); // index column is positional; value unused
        out.spectrum.eigenvalues.push_back(parse_number(toks[1], path, line_no));
        out.weights.weights.push_back(parse_number(toks[2], path, line_no));
    }
    if (out.spectrum.eigenvalues.empty()) throw config_error(path + ": no eigenvalue rows");
    for (std::size_t i = 1; i < out.spectrum.eigenvalues.size(); ++i)
        if (out.spectrum.eigenvalues[i] < out.spectrum.eigenvalues[i - 1])
            throw config_error(path + ": eigenvalues must be nondecreasing (row " +
                               std::to_string(i + 2) + ")");
    normalize(out.weights.weights, path);
    return out;
}

std::string spectrum_file_text(const Spectrum& spec, const InitialWeights& w) {
    if (spec.size() == 0) throw std::invalid_argument("spectrum_file_text: empty spectrum");
    if (w.weights.size() != spec.size())
        throw std::invalid_argument("spectrum_file_text: weight count does not match spectrum");
    std::string body = "index,eigenvalue,weight\n";
    for (std::size_t i = 0; i < spec.size(); ++i)
        body += std::to_string(i + 1) + "," + format_double(spec.eigenvalues[i]) + "," +
                format_double(w.weights[i]) + "\n";
    return body;
}

void write_spectrum_file(const std::string& path, const Spectrum& spec,
                         const InitialWeights& w) {
    write_text_file(path, spectrum_file_text(spec, w));
}

InitialWeights read_weights_file(const std::string& path, std::size_t expected_size) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open weights file: " + path);
    std::string first;
    if (!std::getline(in, first)) throw config_error(path + ": empty file");
    InitialWeights out;
    if (strip(first) == "index,eigenvalue,weight") {
        in.close();
        out = read_spectrum_file(path).weights;
    } else {
        std::string line = first;
        std::size_t line_no = 1;
        do {
            const std::string tok = strip(line);
            if (!tok.empty()) out.weights.push_back(parse_number(tok, path, line_no));
            ++line_no;
        } while (std::getline(in, line));
        if (out.weights.empty()) throw config_error(path + ": no weight rows");
        normalize(out.weights, path);
    }
    if (expected_size > 0 && out.weights.size() != expected_size)
        throw config_error(path + ": got " + std::to_string(out.weights.size()) +
                           " weights, expected " + std::to_string(expected_size));
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open file for writing: " + path);
    out << content;
    if (!out) throw io_error("write failed: " + path);
}

} // namespace pite
