#pragma once

#include "fbra/io.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace fbra {

enum class VerifySuite : std::uint8_t { DS1, QBD, DS3, Containment, All };
VerifySuite parse_verify_suite(std::string_view text);
std::string_view to_string(VerifySuite suite) noexcept;

/// `value` is compared against `threshold` with `value < threshold`; for
/// count-style checks the threshold is 0.5 and the value a failure count.
struct CheckResult {
    std::string suite;
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    [[nodiscard]] bool passed() const noexcept;
    /// nullptr when everything passed.
    [[nodiscard]] const CheckResult* first_failure() const noexcept;
};

[[nodiscard]] VerifyReport run_verify(VerifySuite suite, std::uint64_t seed);

/// suite, check, value, threshold, pass, detail
Table verify_table(const VerifyReport& report);

}  // namespace fbra
