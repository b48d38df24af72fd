#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nilprob/errors.hpp"
#include "nilprob/finite_group.hpp"
#include "nilprob/group_builders.hpp"
#include "nilprob/malcev.hpp"
#include "nilprob/polynomial.hpp"
#include "nilprob/words.hpp"

namespace nilprob {

// cycle notation like "(1 2)(3 4)" with 1-based points; "()" is the identity
inline std::vector<int> parse_cycles(const std::string& text, int degree, int line_no) {
    std::vector<std::vector<int>> cycles;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip();
    while (i < text.size()) {
        if (text[i] != '(') throw ParseError("expected '(' in cycle notation", line_no);
        ++i;
        std::vector<int> cycle;
        skip();
        while (i < text.size() && text[i] != ')') {
            if (!std::isdigit(static_cast<unsigned char>(text[i])))
                throw ParseError("expected a point in cycle notation", line_no);
            int v = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                v = v * 10 + (text[i++] - '0');
            }
            if (v < 1) throw ParseError("points are 1-based", line_no);
            cycle.push_back(v - 1);
            skip();
            if (i < text.size() && text[i] == ',') {
                ++i;
                skip();
            }
        }
        if (i >= text.size()) throw ParseError("unterminated cycle", line_no);
        ++i;  // ')'
        skip();
        if (!cycle.empty()) cycles.push_back(std::move(cycle));
    }
    int needed = degree;
    for (const auto& c : cycles) {
        for (int v : c) needed = std::max(needed, v + 1);
    }
    std::vector<int> perm(needed);
    for (int j = 0; j < needed; ++j) perm[j] = j;
    for (const auto& c : cycles) {
        for (std::size_t j = 0; j < c.size(); ++j) {
            if (perm[c[j]] != c[j] && perm[c[j]] != c[(j + 1) % c.size()])
                throw ParseError("point repeated across cycles", line_no);
            perm[c[j]] = c[(j + 1) % c.size()];
        }
    }
    return perm;
}

// Group definition file: a `perm` block with one generator per line in cycle
// notation, a `table` block with an explicit multiplication table, or a
// `matfp p` block with generator matrices over the p-element field (rows
// separated by ';'). Lines starting with '#' are comments.
inline FiniteGroup load_group_file(std::istream& in, const GroupBuildOptions& opt = {}) {
    std::string line;
    int line_no = 0;
    std::string mode;
    int p = 0;
    std::vector<std::pair<std::string, int>> body;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = line;
        std::size_t start = trimmed.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        trimmed = trimmed.substr(start);
        if (trimmed[0] == '#') continue;
        if (mode.empty()) {
            std::istringstream hs(trimmed);
            hs >> mode;
            if (mode == "matfp") {
                if (!(hs >> p) || p < 2) throw ParseError("matfp needs a field size", line_no);
            } else if (mode != "perm" && mode != "table") {
                throw ParseError("unknown block type '" + mode + "'", line_no);
            }
            continue;
        }
        body.push_back({trimmed, line_no});
    }
    if (mode.empty()) throw ParseError("empty group file", line_no ? line_no : 1);
    if (body.empty()) throw ParseError("block '" + mode + "' has no content", line_no);

    if (mode == "perm") {
        std::vector<std::vector<int>> gens;
        int degree = 1;
        for (const auto& [text, ln] : body) gens.push_back(parse_cycles(text, 1, ln));
        for (const auto& g : gens) degree = std::max(degree, static_cast<int>(g.size()));
        for (auto& g : gens) {
            while (static_cast<int>(g.size()) < degree) g.push_back(static_cast<int>(g.size()));
        }
        return permutation_group(degree, gens, opt);
    }
    if (mode == "table") {
        std::vector<std::int32_t> table;
        std::size_t width = 0;
        for (const auto& [text, ln] : body) {
            std::istringstream ls(text);
            std::size_t count = 0;
            int v;
            while (ls >> v) {
                table.push_back(v);
                ++count;
            }
            if (!ls.eof()) throw ParseError("bad table entry", ln);
            if (width == 0) width = count;
            if (count != width) throw ParseError("ragged multiplication table row", ln);
        }
        if (body.size() != width)
            throw ParseError("table is not square", body.back().second);
        try {
            return FiniteGroup::from_table(std::move(table));
        } catch (const InvalidElement& e) {
            throw ParseError(e.what(), body.front().second);
        }
    }
    // matfp
    std::vector<std::vector<int>> gens;
    int dim = 0;
    for (const auto& [text, ln] : body) {
        std::vector<int> flat;
        std::istringstream rows(text);
        std::string row;
        int nrows = 0, ncols = -1;
        while (std::getline(rows, row, ';')) {
            std::istringstream rs(row);
            int v, c = 0;
            while (rs >> v) {
                if (v < 0 || v >= p) throw ParseError("matrix entry outside the field", ln);
                flat.push_back(v);
                ++c;
            }
            if (!rs.eof()) throw ParseError("bad matrix entry", ln);
            if (ncols == -1) ncols = c;
            if (c != ncols) throw ParseError("ragged matrix row", ln);
            ++nrows;
        }
        if (nrows != ncols) throw ParseError("generator matrix is not square", ln);
        if (dim == 0) dim = nrows;
        if (nrows != dim) throw ParseError("generator matrices of mixed dimension", ln);
        gens.push_back(std::move(flat));
    }
    return matrix_group_fp(p, dim, gens, opt);
}

inline FiniteGroup load_group_file(const std::string& path, const GroupBuildOptions& opt = {}) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open group file '" + path + "'");
    return load_group_file(f, opt);
}

// Word files hold whitespace-separated tokens: x<i> or x<i>^-1 for variables,
// c:<label>, c:"<label with spaces>" or c:#<index> for constants.
inline GroupWord parse_word(const std::string& text, const FiniteGroup& g) {
    std::vector<WordLetter<int>> letters;
    int arity = 0;
    std::size_t i = 0;
    int line_no = 1;
    auto fail = [&](const std::string& msg) { throw ParseError(msg, line_no); };
    while (i < text.size()) {
        if (text[i] == '\n') ++line_no;
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        if (text[i] == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        std::string token;
        if (text.compare(i, 3, "c:\"") == 0) {
            std::size_t close = text.find('"', i + 3);
            if (close == std::string::npos) fail("unterminated quoted label");
            token = text.substr(i, close - i + 1);
            i = close + 1;
            // allow a trailing ^-1 after the quote
            if (text.compare(i, 2, "^-") == 0 || text.compare(i, 2, "^1") == 0) {
                std::size_t j = i;
                while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
                token += text.substr(i, j - i);
                i = j;
            }
        } else {
            std::size_t j = i;
            while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
            token = text.substr(i, j - i);
            i = j;
        }
        int sign = 1;
        if (token.size() >= 2 && token.compare(token.size() - 2, 2, "^1") == 0 &&
            (token.size() < 3 || token[token.size() - 3] != '^')) {
            token.resize(token.size() - 2);
        } else if (token.size() >= 3 && token.compare(token.size() - 3, 3, "^-1") == 0) {
            sign = -1;
            token.resize(token.size() - 3);
        }
        if (token.size() >= 2 && token[0] == 'x' &&
            std::isdigit(static_cast<unsigned char>(token[1]))) {
            int var = std::stoi(token.substr(1));
            if (var < 1) fail("variable indices are 1-based");
            arity = std::max(arity, var);
            letters.push_back(WordLetter<int>::variable(var, sign));
        } else if (token.rfind("c:", 0) == 0) {
            std::string label = token.substr(2);
            if (label.size() >= 2 && label.front() == '"' && label.back() == '"')
                label = label.substr(1, label.size() - 2);
            int elem;
            if (!label.empty() && label[0] == '#') {
                elem = std::stoi(label.substr(1));
                if (elem < 0 || elem >= g.order()) fail("constant index out of range");
            } else {
                elem = g.element_labeled(label);
                if (elem < 0) fail("no element labelled '" + label + "'");
            }
            letters.push_back(WordLetter<int>::constant_of(elem, sign));
        } else {
            fail("unrecognized token '" + token + "'");
        }
    }
    if (letters.empty()) throw ParseError("empty word", line_no);
    return GroupWord(arity, std::move(letters));
}

inline GroupWord load_word_file(const std::string& path, const FiniteGroup& g) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open word file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_word(ss.str(), g);
}

// Malcev group file:
//   malcev m=<m> n0=auto
//   mu[i] = <polynomial in v1..vm, w1..wm>
//   eps[i] = <polynomial in v1..vm, n>
inline MalcevGroup load_malcev_file(std::istream& in, const std::string& name = "file") {
    std::string line;
    int line_no = 0;
    int m = -1;
    std::string n0spec = "auto";
    std::vector<IntPolynomial> mu, eps;
    std::vector<bool> mu_seen, eps_seen;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        std::string trimmed = line.substr(start);
        if (trimmed[0] == '#') continue;
        if (m < 0) {
            std::istringstream hs(trimmed);
            std::string word;
            hs >> word;
            if (word != "malcev") throw ParseError("expected 'malcev' header", line_no);
            std::string field;
            while (hs >> field) {
                if (field.rfind("m=", 0) == 0) {
                    m = std::stoi(field.substr(2));
                } else if (field.rfind("n0=", 0) == 0) {
                    n0spec = field.substr(3);
                } else {
                    throw ParseError("unknown header field '" + field + "'", line_no);
                }
            }
            if (m < 1) throw ParseError("header must set m to a positive value", line_no);
            mu.assign(m, IntPolynomial(2 * m));
            eps.assign(m, IntPolynomial(m + 1));
            mu_seen.assign(m, false);
            eps_seen.assign(m, false);
            continue;
        }
        std::size_t eq = trimmed.find('=');
        if (eq == std::string::npos) throw ParseError("expected '<name> = <polynomial>'", line_no);
        std::string lhs = trimmed.substr(0, eq);
        std::string rhs = trimmed.substr(eq + 1);
        lhs.erase(lhs.find_last_not_of(" \t") + 1);
        bool is_mu = lhs.rfind("mu[", 0) == 0;
        bool is_eps = lhs.rfind("eps[", 0) == 0;
        if ((!is_mu && !is_eps) || lhs.back() != ']')
            throw ParseError("expected mu[i] or eps[i] on the left", line_no);
        int idx = 0;
        try {
            idx = std::stoi(lhs.substr(is_mu ? 3 : 4));
        } catch (...) {
            throw ParseError("bad coordinate index", line_no);
        }
        if (idx < 1 || idx > m) throw ParseError("coordinate index out of range", line_no);
        std::vector<std::string> vars;
        for (int i = 1; i <= m; ++i) vars.push_back("v" + std::to_string(i));
        if (is_mu) {
            for (int i = 1; i <= m; ++i) vars.push_back("w" + std::to_string(i));
        } else {
            vars.push_back("n");
        }
        IntPolynomial poly = PolynomialParser(rhs, vars).parse();
        if (is_mu) {
            mu[idx - 1] = std::move(poly);
            mu_seen[idx - 1] = true;
        } else {
            eps[idx - 1] = std::move(poly);
            eps_seen[idx - 1] = true;
        }
    }
    if (m < 0) throw ParseError("missing malcev header", line_no ? line_no : 1);
    for (int i = 0; i < m; ++i) {
        if (!mu_seen[i]) throw ParseError("missing mu[" + std::to_string(i + 1) + "]", line_no);
        if (!eps_seen[i]) throw ParseError("missing eps[" + std::to_string(i + 1) + "]", line_no);
    }
    MalcevGroup g = MalcevGroup::create(name, m, std::move(mu), std::move(eps));
    if (n0spec != "auto") {
        BigInt declared = BigInt::from_string(n0spec);
        if ((declared % g.n0()) != BigInt(0))
            throw ParseError("declared n0 is not a multiple of the computed one (" +
                             g.n0().to_string() + ")");
    }
    return g;
}

inline MalcevGroup load_malcev_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open malcev file '" + path + "'");
    return load_malcev_file(f, path);
}

// Polynomial file: first line "poly <var> <var> ...", remaining lines are the
// expression.
inline IntPolynomial load_polynomial_file(std::istream& in) {
    std::string line;
    int line_no = 0;
    std::vector<std::string> vars;
    std::string expr;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        std::string trimmed = line.substr(start);
        if (trimmed[0] == '#') continue;
        if (vars.empty()) {
            std::istringstream hs(trimmed);
            std::string word;
            hs >> word;
            if (word != "poly") throw ParseError("expected 'poly' header", line_no);
            std::string v;
            while (hs >> v) vars.push_back(v);
            if (vars.empty()) throw ParseError("poly header lists no variables", line_no);
            continue;
        }
        expr += trimmed + " ";
    }
    if (vars.empty()) throw ParseError("missing poly header", line_no ? line_no : 1);
    if (expr.empty()) throw ParseError("missing polynomial expression", line_no);
    return PolynomialParser(expr, vars).parse();
}

inline IntPolynomial load_polynomial_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open polynomial file '" + path + "'");
    return load_polynomial_file(f);
}

}  // namespace nilprob
