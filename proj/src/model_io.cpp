#include "fastslow/model_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace fastslow {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& name, long line, const std::string& what) {
    throw ParseError(name + ":" + std::to_string(line) + ": " + what);
}

long parse_int(const std::string& name, long line, const std::string& token) {
    long value = 0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        fail(name, line, "expected an integer, got '" + token + "'");
    return value;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string token;
    while (std::getline(in, token, sep)) {
        token = trim(token);
        if (!token.empty()) out.push_back(token);
    }
    return out;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string token;
    while (in >> token) out.push_back(token);
    return out;
}

}  // namespace

ModelFile parse_model(std::istream& in, const std::string& name) {
    ModelFile file;
    enum class Section { None, Model, Switch, Experiment } section = Section::None;
    bool have_model = false;
    bool have_experiment = false;
    ExperimentSpec experiment;
    std::string raw;
    long line = 0;

    while (std::getline(in, raw)) {
        ++line;
        std::string text = trim(raw);
        if (const auto hash = text.find('#'); hash != std::string::npos)
            text = trim(text.substr(0, hash));
        if (text.empty()) continue;

        if (text.front() == '[') {
            if (text == "[model]") {
                if (have_model) fail(name, line, "duplicate [model] section");
                have_model = true;
                section = Section::Model;
            } else if (text == "[switch]") {
                file.model.switches.push_back({});
                section = Section::Switch;
            } else if (text == "[experiment]") {
                if (have_experiment) fail(name, line, "duplicate [experiment] section");
                have_experiment = true;
                section = Section::Experiment;
            } else {
                fail(name, line, "unknown section " + text);
            }
            continue;
        }

        const auto eq = text.find('=');
        if (eq == std::string::npos) fail(name, line, "expected 'key = value'");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));

        switch (section) {
            case Section::None:
                fail(name, line, "key outside of any section");
            case Section::Model:
                if (key == "n_slow") {
                    file.model.n_slow = static_cast<int>(parse_int(name, line, value));
                } else if (key == "periods") {
                    file.model.lattice.periods.clear();
                    for (const std::string& token : split(value, ','))
                        file.model.lattice.periods.push_back(parse_int(name, line, token));
                } else if (key == "strict_coprime") {
                    if (value == "true")
                        file.model.lattice.strict_coprime = true;
                    else if (value == "false")
                        file.model.lattice.strict_coprime = false;
                    else
                        fail(name, line, "strict_coprime must be true or false");
                } else {
                    fail(name, line, "unknown [model] key '" + key + "'");
                }
                break;
            case Section::Switch: {
                SwitchTerm& term = file.model.switches.back();
                const auto tokens = split_ws(value);
                if (key == "pair") {
                    if (tokens.size() != 2) fail(name, line, "pair needs two indices");
                    term.i = static_cast<int>(parse_int(name, line, tokens[0]));
                    term.j = static_cast<int>(parse_int(name, line, tokens[1]));
                } else if (key == "generator") {
                    const auto g = generator_from_string(value);
                    if (!g) fail(name, line, "generator must be sigma1|sigma2|sigma3|unit");
                    term.generator = *g;
                } else if (key == "location") {
                    if (tokens.size() != 2) fail(name, line, "location needs two coordinates");
                    term.loc_i = parse_int(name, line, tokens[0]);
                    term.loc_j = parse_int(name, line, tokens[1]);
                } else if (key == "sign") {
                    if (value == "+1")
                        term.sign = +1;
                    else if (value == "-1")
                        term.sign = -1;
                    else
                        fail(name, line, "sign must be +1 or -1");
                } else {
                    fail(name, line, "unknown [switch] key '" + key + "'");
                }
                break;
            }
            case Section::Experiment: {
                const auto tokens = split_ws(value);
                if (key == "source") {
                    experiment.source = static_cast<int>(parse_int(name, line, value));
                } else if (key == "slits") {
                    experiment.slits.clear();
                    for (const std::string& token : tokens)
                        experiment.slits.push_back(
                            static_cast<int>(parse_int(name, line, token)));
                } else if (key == "screen") {
                    experiment.screen.clear();
                    for (const std::string& token : tokens)
                        experiment.screen.push_back(
                            static_cast<int>(parse_int(name, line, token)));
                } else if (key == "t_slit") {
                    experiment.t_slit = parse_int(name, line, value);
                } else if (key == "t_screen") {
                    experiment.t_screen = parse_int(name, line, value);
                } else {
                    fail(name, line, "unknown [experiment] key '" + key + "'");
                }
                break;
            }
        }
    }

    if (!have_model) throw ParseError(name + ": missing [model] section");
    file.model.validate();
    if (have_experiment) {
        experiment.validate(file.model);
        file.experiment = experiment;
    }
    return file;
}

ModelFile parse_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open model file");
    return parse_model(in, path);
}

void write_model(std::ostream& out, const ModelFile& file) {
    out << "[model]\n";
    out << "n_slow = " << file.model.n_slow << "\n";
    out << "periods = ";
    for (std::size_t k = 0; k < file.model.lattice.periods.size(); ++k)
        out << (k ? "," : "") << file.model.lattice.periods[k];
    out << "\n";
    out << "strict_coprime = " << (file.model.lattice.strict_coprime ? "true" : "false") << "\n";
    for (const SwitchTerm& term : file.model.switches) {
        out << "\n[switch]\n";
        out << "pair = " << term.i << " " << term.j << "\n";
        out << "generator = " << to_string(term.generator) << "\n";
        out << "location = " << term.loc_i << " " << term.loc_j << "\n";
        out << "sign = " << (term.sign > 0 ? "+1" : "-1") << "\n";
    }
    if (file.experiment) {
        const ExperimentSpec& e = *file.experiment;
        out << "\n[experiment]\n";
        out << "source = " << e.source << "\n";
        out << "slits =";
        for (int s : e.slits) out << " " << s;
        out << "\nscreen =";
        for (int s : e.screen) out << " " << s;
        out << "\nt_slit = " << e.t_slit << "\n";
        out << "t_screen = " << e.t_screen << "\n";
    }
}

void write_model(const std::string& path, const ModelFile& file) {
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open for writing");
    write_model(out, file);
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

Eigen::MatrixXcd parse_matrix(std::istream& in, const std::string& name) {
    std::string raw;
    long line = 0;
    long n = -1;
    while (n < 0 && std::getline(in, raw)) {
        ++line;
        const std::string text = trim(raw);
        if (text.empty()) continue;
        n = parse_int(name, line, text);
    }
    if (n < 1) throw ParseError(name + ": missing or invalid matrix dimension");

    Eigen::MatrixXcd m(n, n);
    long row = 0;
    while (row < n && std::getline(in, raw)) {
        ++line;
        const std::string text = trim(raw);
        if (text.empty()) continue;
        const auto tokens = split_ws(text);
        if (static_cast<long>(tokens.size()) != n)
            fail(name, line, "expected " + std::to_string(n) + " entries per row");
        for (long col = 0; col < n; ++col) {
            const auto parts = split(tokens[col], ',');
            if (parts.size() != 2)
                fail(name, line, "matrix entries must be 're,im' pairs");
            try {
                m(row, col) = cplx(std::stod(parts[0]), std::stod(parts[1]));
            } catch (const std::exception&) {
                fail(name, line, "bad numeric entry '" + tokens[col] + "'");
            }
        }
        ++row;
    }
    if (row != n) throw ParseError(name + ": matrix has fewer rows than declared");
    return m;
}

Eigen::MatrixXcd parse_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open matrix file");
    return parse_matrix(in, path);
}

void write_matrix(std::ostream& out, const Eigen::MatrixXcd& m) {
    out << m.rows() << "\n";
    for (long r = 0; r < m.rows(); ++r) {
        for (long c = 0; c < m.cols(); ++c)
            out << (c ? " " : "") << format_double(m(r, c).real()) << ","
                << format_double(m(r, c).imag());
        out << "\n";
    }
}

void write_matrix(const std::string& path, const Eigen::MatrixXcd& m) {
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open for writing");
    write_matrix(out, m);
}

}  // namespace fastslow
