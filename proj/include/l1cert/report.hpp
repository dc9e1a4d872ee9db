#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "l1cert/charsum.hpp"
#include "l1cert/explicit_psi.hpp"
#include "l1cert/stephens.hpp"

namespace l1cert::report {

using nlohmann::json;

inline constexpr const char* kRoundingPolicy = "inflate-1e-12";

std::string parity_name(charsum::Parity p);

// Certification record with the full input echo.
json certificate_json(const stephens::ThetaCertificate& cert);

// {u_max, partial, x1, tail, total, policy}; x1 spelled "exp(L)" since
// useful split points overflow double.
json delta_integral_json(const explicit_psi::DeltaIntegralResult& r);

json min_q0_json(double B, charsum::Parity parity, double target_c,
                 const stephens::MinQ0Result& r);

json sweep_json(charsum::Parity parity, double target_c, const stephens::SweepResult& r);

// RFC 4180 CSV with a header row.
std::string sweep_csv(const stephens::SweepResult& r);
std::string charsum_audit_csv(const std::vector<charsum::CharSumAuditRow>& rows);

// The four headline certifications in one artifact, with both textual
// readings of the second theorem's coefficient flagged, plus notes on
// in-source constant discrepancies surfaced rather than resolved.
json headline_report(unsigned threads = 1);

// Serialize with a stable field order and a trailing newline; written via
// a temp file + rename so readers never observe partial output.
std::string to_text(const json& j);
void write_atomic(const std::string& path, const std::string& contents);

}  // namespace l1cert::report
