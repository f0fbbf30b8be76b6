#include "cli_app.hpp"

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cstareq/corpus.hpp"
#include "cstareq/decide.hpp"
#include "cstareq/invariants.hpp"

namespace cstareq::cli {

namespace {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ----------------------------------------------------------------------
// matrix file parsing: "N M" header + rows, or a JSON array of arrays

std::vector<std::string> tokenize_json_numbers(const std::string& text) {
    // accepts arrays of integers, rationals ("a/b"), and quoted strings
    std::vector<std::string> toks;
    std::size_t i = 0;
    int depth = 0;
    std::size_t rows = 0;
    std::vector<std::size_t> row_lens;
    std::size_t cur = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
            ++i;
        } else if (c == '[') {
            ++depth;
            if (depth == 2) cur = 0;
            if (depth > 2) throw ParseError("matrix JSON nests deeper than two levels");
            ++i;
        } else if (c == ']') {
            if (depth == 2) {
                row_lens.push_back(cur);
                ++rows;
            }
            --depth;
            if (depth < 0) throw ParseError("unbalanced brackets in matrix JSON");
            ++i;
        } else if (c == '"') {
            std::size_t j = text.find('"', i + 1);
            if (j == std::string::npos) throw ParseError("unterminated string in matrix JSON");
            if (depth != 2) throw ParseError("entry outside a row in matrix JSON");
            toks.push_back(text.substr(i + 1, j - i - 1));
            ++cur;
            i = j + 1;
        } else if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i + 1;
            while (j < text.size() &&
                   (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '/'))
                ++j;
            if (depth != 2) throw ParseError("entry outside a row in matrix JSON");
            toks.push_back(text.substr(i, j - i));
            ++cur;
            i = j;
        } else {
            throw ParseError(std::string("unexpected character '") + c + "' in matrix JSON");
        }
    }
    if (depth != 0) throw ParseError("unbalanced brackets in matrix JSON");
    if (rows == 0) throw ParseError("empty matrix");
    for (std::size_t len : row_lens)
        if (len != row_lens[0]) throw ParseError("ragged rows in matrix JSON");
    toks.insert(toks.begin(), std::to_string(row_lens[0]));
    toks.insert(toks.begin(), std::to_string(rows));
    return toks;
}

mpq_class parse_rational(const std::string& tok) {
    mpq_class q;
    if (q.set_str(tok, 10) != 0) throw ParseError("bad number '" + tok + "'");
    if (q.get_den() == 0) throw ParseError("zero denominator in '" + tok + "'");
    q.canonicalize();
    return q;
}

RatMatrix parse_rat_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw ParseError("empty file '" + path + "'");

    std::vector<std::string> toks;
    if (text[first] == '[') {
        toks = tokenize_json_numbers(text.substr(first));
    } else {
        std::istringstream is(text);
        std::string t;
        while (is >> t) toks.push_back(t);
    }
    if (toks.size() < 2) throw ParseError("missing matrix header in '" + path + "'");
    long n = 0, m = 0;
    try {
        n = std::stol(toks[0]);
        m = std::stol(toks[1]);
    } catch (const std::exception&) {
        throw ParseError("bad matrix header in '" + path + "'");
    }
    if (n < 1 || m < 1) throw ParseError("bad matrix dimensions in '" + path + "'");
    if (toks.size() != static_cast<std::size_t>(2 + n * m))
        throw ParseError("matrix entry count mismatch in '" + path + "'");
    RatMatrix out(n, m);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < m; ++j) out(i, j) = parse_rational(toks[2 + i * m + j]);
    return out;
}

IntMatrix parse_int_matrix(const std::string& path) {
    RatMatrix r = parse_rat_matrix(path);
    if (!r.is_integral()) throw ParseError("matrix in '" + path + "' must be integral");
    return r.to_integer();
}

// ----------------------------------------------------------------------
// canonical JSON emission (fixed key order, exact strings, no floats)

std::string jesc(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out.push_back(c);
    }
    return out;
}

std::string jstr(const std::string& s) { return "\"" + jesc(s) + "\""; }

std::string json_int_matrix(const IntMatrix& m) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i) os << ",";
        os << "[";
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) os << ",";
            os << m(i, j).get_str();
        }
        os << "]";
    }
    os << "]";
    return os.str();
}

std::string json_rat_matrix(const RatMatrix& m) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i) os << ",";
        os << "[";
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) os << ",";
            os << jstr(m(i, j).get_str());
        }
        os << "]";
    }
    os << "]";
    return os.str();
}

std::string json_padic_checks(
    const std::map<mpz_class, std::pair<bool, unsigned>>& checks) {
    std::ostringstream os;
    os << "[";
    bool first = true;
    for (const auto& [p, r] : checks) {
        if (!first) os << ",";
        first = false;
        os << "{\"p\":" << jstr(p.get_str()) << ",\"ok\":" << (r.first ? "true" : "false")
           << ",\"precision\":" << r.second << "}";
    }
    os << "]";
    return os.str();
}

std::string json_schedule(const Schedule& s) {
    std::ostringstream os;
    os << "{\"k\":" << s.k << ",\"l\":" << s.l << ",\"n_max\":" << s.n_max
       << ",\"found\":" << (s.found ? "true" : "false") << "}";
    return os.str();
}

std::string json_string_list(const std::vector<std::string>& v) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << jstr(v[i]);
    }
    os << "]";
    return os.str();
}

std::string json_config(const Config& cfg, Mode mode) {
    std::ostringstream os;
    os << "{\"mode\":" << jstr(mode == Mode::Ordered ? "ordered" : "unordered")
       << ",\"height\":" << cfg.entry_height << ",\"precision\":" << cfg.padic_precision
       << ",\"exp_bound\":" << cfg.diag_exponent_bound << ",\"k_max\":" << cfg.k_max
       << ",\"l_max\":" << cfg.l_max << ",\"n_max\":" << cfg.n_max << "}";
    return os.str();
}

// ----------------------------------------------------------------------
// option handling

struct Options {
    Mode mode = Mode::Ordered;
    Config cfg;
    std::string expect;  // empty = no expectation
    mpz_class prime = 0;
    bool have_m1 = false, have_m2 = false, have_f = false, have_n = false;
    mpz_class m1, m2, f;
    std::size_t n = 0;
    std::vector<std::string> positional;
};

long parse_long(const std::string& flag, const std::string& val) {
    try {
        std::size_t pos = 0;
        long v = std::stol(val, &pos);
        if (pos != val.size()) throw std::invalid_argument(val);
        return v;
    } catch (const std::exception&) {
        throw ParseError("bad value '" + val + "' for " + flag);
    }
}

void apply_option(Options& o, const std::string& key, const std::string& val) {
    if (key == "--mode") {
        if (val == "ordered") o.mode = Mode::Ordered;
        else if (val == "unordered") o.mode = Mode::Unordered;
        else throw ParseError("bad value '" + val + "' for --mode");
    } else if (key == "--height") {
        o.cfg.entry_height = parse_long(key, val);
    } else if (key == "--precision") {
        o.cfg.padic_precision = static_cast<unsigned>(parse_long(key, val));
    } else if (key == "--exp-bound") {
        o.cfg.diag_exponent_bound = static_cast<unsigned>(parse_long(key, val));
    } else if (key == "--expect") {
        if (val != "equivalent" && val != "not_equivalent" && val != "unknown")
            throw ParseError("bad value '" + val + "' for --expect");
        o.expect = val;
    } else if (key == "--prime") {
        o.prime = parse_long(key, val);
    } else if (key == "--m1") {
        o.m1 = parse_long(key, val);
        o.have_m1 = true;
    } else if (key == "--m2") {
        o.m2 = parse_long(key, val);
        o.have_m2 = true;
    } else if (key == "--f") {
        o.f = parse_long(key, val);
        o.have_f = true;
    } else if (key == "--n") {
        long v = parse_long(key, val);
        if (v < 1) throw ParseError("--n must be positive");
        o.n = static_cast<std::size_t>(v);
        o.have_n = true;
    } else {
        throw ParseError("unknown option " + key);
    }
}

// optional config file named by an environment variable; flags override
void load_env_config(Options& o, std::ostream& err) {
    const char* path = std::getenv("CSTAREQ_CONFIG");
    if (!path || !*path) return;
    std::ifstream in(path);
    if (!in) throw ParseError(std::string("cannot open config file '") + path + "'");
    std::string line;
    while (std::getline(in, line)) {
        std::size_t h = line.find('#');
        if (h != std::string::npos) line = line.substr(0, h);
        std::istringstream is(line);
        std::string key, val;
        if (!(is >> key)) continue;
        if (!(is >> val)) throw ParseError("missing value for '" + key + "' in config file");
        apply_option(o, "--" + key, val);
    }
    err << "config loaded from " << path << "\n";
}

Options parse_options(const std::vector<std::string>& args, std::ostream& err) {
    Options o;
    load_env_config(o, err);
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) == 0) {
            if (i + 1 >= args.size()) throw ParseError("missing value for " + a);
            apply_option(o, a, args[++i]);
        } else {
            o.positional.push_back(a);
        }
    }
    return o;
}

const char* kUsage =
    "usage: cstareq <command> [options]\n"
    "  analyze <A> [--prime p] [--precision m]\n"
    "  decide <A> <B> [--mode ordered|unordered] [--height H] [--precision m]\n"
    "         [--exp-bound E] [--expect equivalent|not_equivalent|unknown]\n"
    "  verify <A> <B> <J> [--mode ordered|unordered] [--precision m]\n"
    "  cc --m1 <modulus> --m2 <inverted> --f <det> --n <size>\n"
    "  corpus\n"
    "matrix files: 'N M' header plus rows, or a JSON array of arrays\n";

// ----------------------------------------------------------------------
// subcommands

int cmd_analyze(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.positional.size() != 1) throw ParseError("analyze needs exactly one matrix file");
    IntMatrix a = parse_int_matrix(o.positional[0]);
    InvariantReport rep = analyze(a, o.cfg.padic_precision);
    std::ostringstream os;
    os << "{\"schema_version\":1,\"command\":\"analyze\",\"matrix\":" << json_int_matrix(a)
       << ",\"prim_det\":[";
    bool first = true;
    for (const mpz_class& p : rep.prim_det) {
        if (!first) os << ",";
        first = false;
        os << jstr(p.get_str());
    }
    os << "],\"ulm\":[";
    first = true;
    for (const auto& [p, n] : rep.ulm) {
        if (!first) os << ",";
        first = false;
        os << "{\"p\":" << jstr(p.get_str()) << ",\"n\":" << n << "}";
    }
    os << "],\"field\":" << jstr(rep.field_tag) << ",\"lambda_ideals\":[";
    first = true;
    for (const LambdaIdeal& li : rep.lambda_primes) {
        if (!first) os << ",";
        first = false;
        os << "{\"p\":" << jstr(li.p.get_str()) << ",\"kind\":" << jstr(std::string(1, li.kind))
           << ",\"root\":" << jstr(li.root.get_str()) << ",\"v\":" << li.v << "}";
    }
    os << "],\"trace_module\":" << jstr(rep.trace_module.str())
       << ",\"inner_product\":" << jstr(rep.inner_product.str()) << ",\"extension_columns\":[";
    first = true;
    for (const auto& [p, pm] : rep.extension_columns) {
        if (o.prime != 0 && p != o.prime) continue;
        if (!first) os << ",";
        first = false;
        os << "{\"p\":" << jstr(p.get_str()) << ",\"precision\":" << pm.m
           << ",\"columns\":" << json_int_matrix(pm.a) << "}";
    }
    os << "],\"config\":" << json_config(o.cfg, o.mode) << "}";
    out << os.str() << "\n";
    err << "analyzed " << a.rows() << "x" << a.cols() << " matrix\n";
    return 0;
}

std::string verdict_word(VerdictKind k) {
    switch (k) {
        case VerdictKind::Equivalent: return "equivalent";
        case VerdictKind::NotEquivalent: return "not_equivalent";
        default: return "unknown";
    }
}

int cmd_decide(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.positional.size() != 2) throw ParseError("decide needs exactly two matrix files");
    IntMatrix a = parse_int_matrix(o.positional[0]);
    IntMatrix b = parse_int_matrix(o.positional[1]);
    auto t0 = std::chrono::steady_clock::now();
    Verdict v = decide_pair(a, b, o.mode, o.cfg);
    auto t1 = std::chrono::steady_clock::now();
    std::ostringstream os;
    os << "{\"schema_version\":1,\"command\":\"decide\",\"verdict\":"
       << jstr(verdict_word(v.kind)) << ",\"method\":" << jstr(v.method) << ",\"witness\":";
    if (v.witness) {
        os << "{\"matrix\":" << json_rat_matrix(v.witness->j) << ",\"mu\":"
           << jstr(v.witness->mu.str())
           << ",\"padic_checks\":" << json_padic_checks(v.witness->padic_checks)
           << ",\"schedule\":" << json_schedule(v.witness->schedule) << "}";
    } else {
        os << "null";
    }
    os << ",\"certificate\":";
    if (v.certificate) {
        os << "{\"invariant\":" << jstr(v.certificate->invariant)
           << ",\"value_a\":" << jstr(v.certificate->value_a)
           << ",\"value_b\":" << jstr(v.certificate->value_b)
           << ",\"anchor\":" << jstr(v.certificate->anchor) << "}";
    } else {
        os << "null";
    }
    os << ",\"report\":{\"checks_passed\":" << json_string_list(v.report.checks_passed)
       << ",\"unsupported_steps\":" << json_string_list(v.report.unsupported_steps)
       << ",\"bounds\":" << jstr(v.report.bounds) << "}"
       << ",\"config\":" << json_config(o.cfg, o.mode) << "}";
    out << os.str() << "\n";
    err << "decide: " << verdict_word(v.kind) << " via " << v.method << " in "
        << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() << " ms\n";
    if (!o.expect.empty() && o.expect != verdict_word(v.kind)) {
        err << "expected " << o.expect << " but got " << verdict_word(v.kind) << "\n";
        return 1;
    }
    return 0;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.positional.size() != 3)
        throw ParseError("verify needs matrix files A, B, and J");
    IntMatrix a = parse_int_matrix(o.positional[0]);
    IntMatrix b = parse_int_matrix(o.positional[1]);
    RatMatrix j = parse_rat_matrix(o.positional[2]);
    VerifyResult vr = verify_witness(a, b, j, o.mode, o.cfg);
    const char* word = vr.kind == VerifyKind::Verified    ? "verified"
                       : vr.kind == VerifyKind::Refuted   ? "refuted"
                                                          : "inconclusive";
    std::ostringstream os;
    os << "{\"schema_version\":1,\"command\":\"verify\",\"result\":" << jstr(word)
       << ",\"reason\":" << jstr(vr.reason) << ",\"mu\":" << jstr(vr.mu.str())
       << ",\"padic_checks\":" << json_padic_checks(vr.padic_checks)
       << ",\"schedule\":" << json_schedule(vr.schedule)
       << ",\"config\":" << json_config(o.cfg, o.mode) << "}";
    out << os.str() << "\n";
    err << "verify: " << word << "\n";
    return 0;
}

int cmd_cc(const Options& o, std::ostream& out, std::ostream& err) {
    if (!o.positional.empty()) throw ParseError("cc takes only --m1/--m2/--f/--n");
    if (!o.have_m1 || !o.have_m2 || !o.have_f || !o.have_n)
        throw ParseError("cc requires --m1, --m2, --f, and --n");
    auto classes = cc_set(o.m1, o.m2, o.f, o.n);
    std::ostringstream os;
    os << "{\"schema_version\":1,\"command\":\"cc\",\"m1\":" << jstr(o.m1.get_str())
       << ",\"m2\":" << jstr(o.m2.get_str()) << ",\"f\":" << jstr(o.f.get_str())
       << ",\"n\":" << o.n << ",\"count\":" << classes.size() << ",\"classes\":[";
    for (std::size_t i = 0; i < classes.size(); ++i) {
        if (i) os << ",";
        os << json_int_matrix(classes[i]);
    }
    os << "]}";
    out << os.str() << "\n";
    err << "cc: " << classes.size() << " residue classes\n";
    return 0;
}

int cmd_corpus(const Options& o, std::ostream& out, std::ostream& err) {
    if (!o.positional.empty()) throw ParseError("corpus takes no arguments");
    auto results = run_corpus();
    bool all = true;
    std::ostringstream os;
    os << "{\"schema_version\":1,\"command\":\"corpus\",\"results\":[";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const CorpusResult& r = results[i];
        if (i) os << ",";
        os << "{\"name\":" << jstr(r.name) << ",\"pass\":" << (r.pass ? "true" : "false")
           << ",\"anchor\":" << jstr(r.anchor) << ",\"detail\":" << jstr(r.detail) << "}";
        if (!r.pass) all = false;
    }
    os << "],\"all_pass\":" << (all ? "true" : "false") << "}";
    out << os.str() << "\n";
    for (const CorpusResult& r : results)
        err << (r.pass ? "PASS  " : "FAIL  ") << r.name
            << (r.pass ? "" : " — " + r.anchor + " (" + r.detail + ")") << "\n";
    err << (all ? "corpus: all examples pass\n" : "corpus: FAILURES present\n");
    return all ? 0 : 1;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (args.empty()) {
        err << kUsage;
        return 2;
    }
    try {
        const std::string& cmd = args[0];
        Options o = parse_options({args.begin() + 1, args.end()}, err);
        if (cmd == "analyze") return cmd_analyze(o, out, err);
        if (cmd == "decide") return cmd_decide(o, out, err);
        if (cmd == "verify") return cmd_verify(o, out, err);
        if (cmd == "cc") return cmd_cc(o, out, err);
        if (cmd == "corpus") return cmd_corpus(o, out, err);
        err << "unknown command '" << cmd << "'\n" << kUsage;
        return 2;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        err << "precondition violated: " << e.what() << "\n";
        return 3;
    } catch (const UnsupportedError& e) {
        err << "unsupported input: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace cstareq::cli
