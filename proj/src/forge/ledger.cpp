#include "dysonforge/forge.hpp"

#include <fmt/format.h>

#include <ostream>

namespace dysonforge::forge {

namespace {

using liealg::kGenerators;

nlohmann::json coefficient_table(const std::vector<Coefficients>& samples, bool imaginary)
{
    nlohmann::json table = nlohmann::json::object();
    for (auto g : kGenerators) {
        const int k = liealg::index(g);
        std::vector<double> column;
        column.reserve(samples.size());
        for (const auto& c : samples) {
            column.push_back(imaginary ? c[k].imag() : c[k].real());
        }
        table[std::string(liealg::label(g))] = std::move(column);
    }
    return table;
}

}  // namespace

nlohmann::json ledger_to_json(const IterationLedger& ledger)
{
    nlohmann::json out;
    out["pair"] = ledger.pair;
    out["invariant_family"] = ledger.invariant_family;
    out["n_max"] = ledger.n_max;
    out["tol_gate"] = ledger.tol_gate;
    out["grid"] = {{"t0", ledger.grid.front()}, {"t1", ledger.grid.back()}, {"samples", ledger.grid.size()}};
    out["refused"] = ledger.any_refused();
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : ledger.entries) {
        nlohmann::json j;
        j["kind"] = kind_name(e.kind);
        j["n"] = e.n;
        j["status"] = e.refused ? "REFUSED" : "ADMITTED";
        j["gate_residual"] = e.gate_residual;
        if (e.refused) {
            j["breakdown_t"] = e.breakdown_t;
            j["breakdown_anti_hermitian"] = coefficient_table(e.breakdown, true);
        } else {
            j["h_anti_hermitian"] = e.h_anti_hermitian;
            j["h"] = coefficient_table(e.h, false);
            if (!e.fingerprint.empty()) {
                j["fingerprint"] = e.fingerprint;
            }
        }
        entries.push_back(std::move(j));
    }
    out["entries"] = std::move(entries);
    return out;
}

void write_h_series_csv(std::ostream& os, const IterationLedger& ledger, int n)
{
    std::vector<const LedgerEntry*> columns;
    for (Kind kind : {Kind::Eta, Kind::EtaTilde}) {
        const LedgerEntry* e = ledger.find(kind, n);
        if (e != nullptr && !e->refused) {
            columns.push_back(e);
        }
    }
    os << "t";
    for (const auto* e : columns) {
        for (auto g : kGenerators) {
            os << ',' << kind_name(e->kind) << ':' << liealg::label(g);
        }
    }
    os << '\n';
    for (std::size_t i = 0; i < ledger.grid.size(); ++i) {
        os << fmt::format("{:.17g}", ledger.grid[i]);
        for (const auto* e : columns) {
            for (int k = 0; k < liealg::kDim; ++k) {
                os << fmt::format(",{:.17g}", e->h[i][k].real());
            }
        }
        os << '\n';
    }
}

}  // namespace dysonforge::forge
