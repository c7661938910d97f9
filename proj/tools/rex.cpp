// rex: batch workbench for normalized regular expressions.
//
// Subcommands: gen | normalize | lift | dfa | simplify | enum-minimal |
// snapshot-save | snapshot-load.  Stats go to stdout as TSV (--latex wraps
// them as table rows); per-expression result streams go to --out.
// Exit codes: 0 ok, 1 usage, 2 I/O, 3 identifiers exhausted, 4 invariant
// violation.

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "rl/generate.hpp"
#include "rl/simplify.hpp"

using namespace rl;

namespace {

struct Options {
    int nl = 2;
    int32_t maxIds = 5'000'000;
    uint64_t seed = 1;
    int64_t size = 0;
    int64_t count = 0;
    std::string algo;
    bool opt = false;       // n-ary normalization
    bool doLift = false;    // pre-lift inputs of the dfa command
    int64_t bound = -1;     // automaton-size bound; -1 = default by nl
    std::string catalogue;
    std::string outPath;
    std::vector<std::string> inPaths;
    bool latex = false;
    int jobs = 1;
};

int64_t nowNs() {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> readLines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

// One stats table row; --latex turns tabs into " & " with a trailing "\\".
void emitRow(const Options& opt, const std::vector<std::string>& cells) {
    std::string sep = opt.latex ? " & " : "\t";
    for (size_t i = 0; i < cells.size(); ++i) std::cout << (i ? sep : "") << cells[i];
    std::cout << (opt.latex ? " \\\\\n" : "\n");
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

// Number of distinct subexpressions of e, atoms included.
int64_t dagNodeCount(const ExprStore& store, ExprId e) {
    std::vector<ExprId> stack{e};
    std::unordered_set<ExprId> seen;
    while (!stack.empty()) {
        ExprId cur = stack.back();
        stack.pop_back();
        if (!seen.insert(cur).second) continue;
        for (ExprId c : store.children(cur)) stack.push_back(c);
    }
    return static_cast<int64_t>(seen.size());
}

int64_t effectiveBound(const Options& opt) {
    if (opt.bound >= 0) return opt.bound;
    return opt.nl > 2 ? 512 : 0;  // 0 = unbounded
}

ExprId universalId(ExprStore& store) {
    std::vector<ExprId> ls;
    for (int x = 0; x < store.nl(); ++x) ls.push_back(letterId(x));
    return store.star(store.unionN(ls));
}

int cmdGen(const Options& opt) {
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!opt.outPath.empty()) {
        file.open(opt.outPath);
        if (!file) throw IoError("cannot write " + opt.outPath);
        out = &file;
    }
    std::mt19937_64 rng(opt.seed);
    for (int64_t i = 0; i < opt.count; ++i) *out << printPlain(*randomPlain(rng, opt.size, opt.nl)) << '\n';
    if (!*out) throw IoError("write failed");
    return 0;
}

// normalize / lift: per-file aggregates in the layout
// file nExpr nErr readNs parseNs workNs avgSub inUse empty nempty iter dejaVu [avgLifted]
std::string runNormalizeFile(const Options& opt, const std::string& path, bool withLift) {
    int64_t t0 = nowNs();
    auto lines = readLines(path);
    int64_t readNs = nowNs() - t0;

    ExprStore store(opt.maxIds, opt.nl);
    int64_t parseNs = 0, workNs = 0, nOk = 0, nErr = 0, subSum = 0, liftedSum = 0;
    for (size_t i = 0; i < lines.size(); ++i) {
        PlainPtr e;
        int64_t t1 = nowNs();
        try {
            e = parsePlain(lines[i]);
        } catch (const ParseError& pe) {
            ++nErr;
            std::cerr << path << ":" << (i + 1) << ": parse error at column " << pe.column << "\n";
            continue;
        }
        parseNs += nowNs() - t1;
        int64_t t2 = nowNs();
        if (withLift) {
            e = lift(*e);
            liftedSum += plainSize(*e);
        }
        ExprId id = store.normalize(*e, opt.opt);
        workNs += nowNs() - t2;
        subSum += dagNodeCount(store, id);
        ++nOk;
    }
    const auto& st = store.stats();
    std::vector<std::string> cells{
        path,
        std::to_string(nOk),
        std::to_string(nErr),
        std::to_string(readNs),
        std::to_string(parseNs),
        std::to_string(workNs),
        fmt(nOk ? double(subSum) / double(nOk) : 0.0),
        std::to_string(store.inUseCount()),
        std::to_string(st.searchesEmpty),
        std::to_string(st.searchesNonEmpty),
        std::to_string(st.iterations),
        std::to_string(st.dejaVu),
    };
    if (withLift) cells.push_back(fmt(nOk ? double(liftedSum) / double(nOk) : 0.0));
    std::string sep = opt.latex ? " & " : "\t";
    std::string row;
    for (size_t i = 0; i < cells.size(); ++i) row += (i ? sep : "") + cells[i];
    row += opt.latex ? " \\\\" : "";
    return row;
}

// dfa: per-file aggregates
// file nExpr nErr nSkip avgD avgEq maxEq minimalRate vuRate finalEq inUse
std::string runDfaFile(const Options& opt, const std::string& path) {
    auto lines = readLines(path);
    Session s(opt.maxIds, opt.nl);
    int64_t nOk = 0, nErr = 0, nSkip = 0, dSum = 0, eqSum = 0, eqMax = 0, nMinimal = 0, nVu = 0;
    std::vector<ExprId> roots;
    for (size_t i = 0; i < lines.size(); ++i) {
        PlainPtr e;
        try {
            e = parsePlain(lines[i]);
        } catch (const ParseError& pe) {
            ++nErr;
            std::cerr << path << ":" << (i + 1) << ": parse error at column " << pe.column << "\n";
            continue;
        }
        if (opt.doLift) e = lift(*e);
        bool retried = false;
        for (;;) {
            try {
                ExprId id = s.store.normalize(*e, opt.opt);
                if (opt.algo == "E") {
                    dSum += static_cast<int64_t>(s.deriv.buildDfaE(id).size());
                } else {
                    s.deriv.resetDerivCount();
                    s.deriv.buildDfaB(s.bg, id, opt.algo != "B");
                    if (s.deriv.derivCount() == 0) ++nVu;
                    Mdfa m = mdfaOf(s.bg, id);
                    int64_t states = static_cast<int64_t>(m.states.size());
                    if (opt.algo == "M") {
                        s.index.unifyInto(s.bg, minimize(s.bg, id));
                        int64_t after = static_cast<int64_t>(mdfaOf(s.bg, id).states.size());
                        if (after == states) ++nMinimal;
                        states = after;
                    }
                    dSum += states;
                    eqSum += states;
                    eqMax = std::max(eqMax, states);
                    roots.push_back(s.bg.rep(id));
                }
                ++nOk;
                break;
            } catch (const IdentifiersExhausted&) {
                if (retried) {
                    ++nSkip;
                    break;
                }
                retried = true;
                s.gc(roots);
            }
        }
    }
    std::vector<std::string> cells{
        path,
        std::to_string(nOk),
        std::to_string(nErr),
        std::to_string(nSkip),
        fmt(nOk ? double(dSum) / double(nOk) : 0.0),
        fmt(nOk ? double(eqSum) / double(nOk) : 0.0),
        std::to_string(eqMax),
        fmt(nOk ? double(nMinimal) / double(nOk) : 0.0),
        fmt(nOk ? double(nVu) / double(nOk) : 0.0),
        std::to_string(s.bg.eqCount()),
        std::to_string(s.store.inUseCount()),
    };
    std::string sep = opt.latex ? " & " : "\t";
    std::string row;
    for (size_t i = 0; i < cells.size(); ++i) row += (i ? sep : "") + cells[i];
    row += opt.latex ? " \\\\" : "";
    return row;
}

// Log-scale size bucket label: 0, 1:2, 3:4, 5:8, 9:16, ...
int bucketOf(int64_t size) {
    if (size <= 0) return 0;
    int b = 1;
    int64_t hi = 2;
    while (size > hi) {
        hi *= 2;
        ++b;
    }
    return b;
}

std::string bucketLabel(int b) {
    if (b == 0) return "0";
    int64_t hi = int64_t(1) << b;
    return std::to_string(hi / 2 + 1) + ":" + std::to_string(hi);
}

struct SimplifyResult {
    std::vector<std::string> streamLines;
    std::vector<std::string> tableRows;
};

SimplifyResult runSimplifyFile(const Options& opt, const std::string& path) {
    auto lines = readLines(path);
    Session s(opt.maxIds, opt.nl);

    int64_t cataMax = 0;
    bool hasCatalogue = !opt.catalogue.empty();
    if (hasCatalogue) {
        preloadCatalogue(s, opt.catalogue);
        s.bg.forEachEq([&](int32_t eq) { cataMax = std::max(cataMax, s.store.size(s.bg.leftOf(eq))); });
    }

    PipelineConfig cfg;
    cfg.mdfaBound = effectiveBound(opt);
    std::string a = opt.algo;
    bool iterate = false;
    if (a == "RI" || a == "PUI") {
        iterate = true;
        a = a == "RI" ? "R" : "PU";
    }
    cfg.propagate = (a == "P" || a == "PU" || a == "R");
    cfg.unifyGlobal = (a == "U" || a == "PU" || a == "R");

    ExprId universal = universalId(s.store);
    std::vector<ExprId> outputs;      // kept alive across gc as roots
    std::vector<int64_t> inputSizes;  // aligned with outputs
    std::vector<size_t> lineNos;
    int64_t nErr = 0, nSkip = 0;

    auto runOne = [&](const PlainExpr& e) -> ExprId {
        if (a == "N") return s.store.normalize(e, opt.opt);
        if (a == "L") return s.store.normalize(*lift(e), opt.opt);
        return s.simplifyPlain(cfg, e);
    };
    for (size_t i = 0; i < lines.size(); ++i) {
        PlainPtr e;
        try {
            e = parsePlain(lines[i]);
        } catch (const ParseError& pe) {
            ++nErr;
            std::cerr << path << ":" << (i + 1) << ": parse error at column " << pe.column << "\n";
            continue;
        }
        bool retried = false;
        for (;;) {
            try {
                ExprId out = runOne(*e);
                outputs.push_back(out);
                inputSizes.push_back(plainSize(*e));
                lineNos.push_back(i + 1);
                break;
            } catch (const IdentifiersExhausted&) {
                if (retried) {
                    ++nSkip;
                    break;
                }
                retried = true;
                s.gc(outputs);
                universal = universalId(s.store);
            }
        }
    }

    if (iterate) {
        // Second pass over the first pass's outputs with the enriched
        // background; representatives only improve.
        for (size_t i = 0; i < outputs.size(); ++i) {
            try {
                outputs[i] = s.simplifyId(cfg, outputs[i]);
            } catch (const IdentifiersExhausted&) {
                s.gc(outputs);
                outputs[i] = s.bg.rep(outputs[i]);
            }
        }
    }

    SimplifyResult res;
    int64_t inSum = 0, outSum = 0, nUniversal = 0;
    std::map<int, int64_t> bucketCount;
    std::map<int, std::unordered_set<ExprId>> bucketDiff;
    for (size_t i = 0; i < outputs.size(); ++i) {
        ExprId out = s.bg.rep(outputs[i]);
        int64_t outSize = s.store.size(out);
        bool minimal = hasCatalogue && outSize <= cataMax && s.index.containsRep(out);
        std::ostringstream line;
        line << lineNos[i] << '\t' << inputSizes[i] << '\t' << outSize << '\t' << s.store.print(out)
             << '\t' << (minimal ? 1 : 0);
        res.streamLines.push_back(line.str());
        inSum += inputSizes[i];
        outSum += outSize;
        if (out == s.bg.rep(universal)) ++nUniversal;
        int b = bucketOf(outSize);
        ++bucketCount[b];
        bucketDiff[b].insert(out);
    }

    int64_t nOk = static_cast<int64_t>(outputs.size());
    std::string sep = opt.latex ? " & " : "\t";
    auto join = [&](std::vector<std::string> cells) {
        std::string row;
        for (size_t i = 0; i < cells.size(); ++i) row += (i ? sep : "") + cells[i];
        return row + (opt.latex ? " \\\\" : "");
    };
    res.tableRows.push_back(join({path, std::to_string(nOk), std::to_string(nErr),
                                  std::to_string(nSkip), fmt(nOk ? double(inSum) / nOk : 0.0),
                                  fmt(nOk ? double(outSum) / nOk : 0.0),
                                  fmt(nOk ? double(nUniversal) / nOk : 0.0)}));
    for (auto& [b, n] : bucketCount)
        res.tableRows.push_back(join({path + " bucket " + bucketLabel(b), std::to_string(n),
                                      std::to_string(bucketDiff[b].size())}));
    return res;
}

int cmdEnumMinimal(const Options& opt) {
    Session s(opt.maxIds, opt.nl);
    Catalogue cat = enumerateMinimal(s, static_cast<int>(opt.size));
    for (size_t sz = 0; sz < cat.bySize.size(); ++sz)
        emitRow(opt, {std::to_string(sz), std::to_string(cat.count(sz)),
                      std::to_string(cat.countUpTo(sz))});
    if (!opt.outPath.empty()) saveSnapshotFile(s.store, s.bg, opt.outPath);
    return 0;
}

int cmdSnapshotSave(const Options& opt) {
    Session s(opt.maxIds, opt.nl);
    for (const auto& path : opt.inPaths) {
        auto lines = readLines(path);
        for (size_t i = 0; i < lines.size(); ++i) {
            try {
                ExprId id = s.store.normalize(*parsePlain(lines[i]), opt.opt);
                s.deriv.buildDfaB(s.bg, id, true);
            } catch (const ParseError& pe) {
                std::cerr << path << ":" << (i + 1) << ": parse error at column " << pe.column
                          << "\n";
            }
        }
    }
    saveSnapshotFile(s.store, s.bg, opt.outPath);
    emitRow(opt, {std::to_string(s.store.inUseCount()), std::to_string(s.bg.eqCount())});
    return 0;
}

int cmdSnapshotLoad(const Options& opt) {
    Session s(opt.maxIds, opt.nl);
    SnapshotLoadResult r{};
    for (const auto& path : opt.inPaths) {
        auto one = loadSnapshotFile(s.store, s.bg, path);
        r.expressions += one.expressions;
        r.links += one.links;
        r.equations += one.equations;
    }
    s.store.audit();
    s.bg.audit(true);
    emitRow(opt, {std::to_string(r.expressions), std::to_string(r.links),
                  std::to_string(r.equations), std::to_string(s.store.inUseCount()),
                  std::to_string(s.bg.eqCount())});
    return 0;
}

// Shards the per-file work across opt.jobs threads; rows print in input
// order.  Each worker owns its whole state, so nothing is shared.
template <class Work>
int runSharded(const Options& opt, const Work& work) {
    std::vector<std::string> rows(opt.inPaths.size());
    std::vector<std::string> errors(opt.inPaths.size());
    int jobs = std::max(1, std::min<int>(opt.jobs, static_cast<int>(opt.inPaths.size())));
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= opt.inPaths.size()) return;
            try {
                rows[i] = work(opt.inPaths[i]);
            } catch (const std::exception& ex) {
                errors[i] = ex.what();
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    bool failed = false;
    for (size_t i = 0; i < rows.size(); ++i) {
        if (!errors[i].empty()) {
            std::cerr << opt.inPaths[i] << ": " << errors[i] << "\n";
            failed = true;
        } else {
            std::cout << rows[i] << "\n";
        }
    }
    return failed ? 2 : 0;
}

int dispatch(const std::string& cmd, const Options& opt) {
    if (cmd == "gen") return cmdGen(opt);
    if (cmd == "normalize")
        return runSharded(opt, [&](const std::string& p) { return runNormalizeFile(opt, p, false); });
    if (cmd == "lift")
        return runSharded(opt, [&](const std::string& p) { return runNormalizeFile(opt, p, true); });
    if (cmd == "dfa") return runSharded(opt, [&](const std::string& p) { return runDfaFile(opt, p); });
    if (cmd == "simplify") {
        std::ostream* stream = &std::cout;
        std::ofstream file;
        if (!opt.outPath.empty()) {
            file.open(opt.outPath);
            if (!file) throw IoError("cannot write " + opt.outPath);
            stream = &file;
        }
        int rc = 0;
        for (const auto& path : opt.inPaths) {
            SimplifyResult res = runSimplifyFile(opt, path);
            for (const auto& l : res.streamLines) *stream << l << "\n";
            for (const auto& r : res.tableRows) std::cout << r << "\n";
        }
        return rc;
    }
    if (cmd == "enum-minimal") return cmdEnumMinimal(opt);
    if (cmd == "snapshot-save") return cmdSnapshotSave(opt);
    if (cmd == "snapshot-load") return cmdSnapshotLoad(opt);
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"regular-language workbench"};
    app.require_subcommand(1);
    Options opt;

    auto addCommon = [&](CLI::App* sub) {
        sub->add_option("--nl", opt.nl, "alphabet size")->check(CLI::Range(1, 26));
        sub->add_option("--max-ids", opt.maxIds, "expression identifier capacity");
        sub->add_option("--seed", opt.seed, "random seed");
        sub->add_option("--size", opt.size, "expression size / enumeration bound");
        sub->add_option("--count", opt.count, "number of expressions");
        sub->add_option("--algo", opt.algo, "algorithm");
        sub->add_flag("--opt", opt.opt, "n-ary normalization");
        sub->add_flag("--lift", opt.doLift, "lift inputs first");
        sub->add_option("--bound", opt.bound, "automaton-size bound (0 = unlimited)");
        sub->add_option("--catalogue", opt.catalogue, "catalogue snapshot path");
        sub->add_option("--in", opt.inPaths, "input file(s)");
        sub->add_option("--out", opt.outPath, "output file");
        sub->add_flag("--latex", opt.latex, "table-shaped output");
        sub->add_option("--jobs", opt.jobs, "worker threads over input files")->check(CLI::Range(1, 256));
    };
    for (const char* name : {"gen", "normalize", "lift", "dfa", "simplify", "enum-minimal",
                             "snapshot-save", "snapshot-load"})
        addCommon(app.add_subcommand(name));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (cmd == "gen" && opt.count <= 0) throw CLI::ValidationError("gen needs --count");
        if (cmd == "dfa" && opt.algo != "E" && opt.algo != "B" && opt.algo != "O" && opt.algo != "M")
            throw CLI::ValidationError("dfa needs --algo E|B|O|M");
        if (cmd == "simplify") {
            static const std::vector<std::string> ok{"N", "L", "M", "P", "U", "PU", "R", "RI", "PUI"};
            if (std::find(ok.begin(), ok.end(), opt.algo) == ok.end())
                throw CLI::ValidationError("simplify needs --algo N|L|M|P|U|PU|R|RI|PUI");
            if ((opt.algo == "R" || opt.algo == "RI") && opt.catalogue.empty())
                throw CLI::ValidationError("algo " + opt.algo + " needs --catalogue");
        }
        if (cmd == "enum-minimal" && opt.size <= 0)
            throw CLI::ValidationError("enum-minimal needs --size");
        if ((cmd == "snapshot-save" || cmd == "snapshot-load" || cmd == "normalize" ||
             cmd == "lift" || cmd == "dfa" || cmd == "simplify") &&
            opt.inPaths.empty())
            throw CLI::ValidationError(cmd + " needs --in");
        if (cmd == "snapshot-save" && opt.outPath.empty())
            throw CLI::ValidationError("snapshot-save needs --out");
        return dispatch(cmd, opt);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const IdentifiersExhausted& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const InvariantViolation& e) {
        std::cerr << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
}
