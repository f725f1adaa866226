#pragma once

#include "qrw/graded.hpp"
#include "qrw/qtrs.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qrw::dsl {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message, const std::string& source = {});
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    /// File name, empty for in-memory text.
    const std::string& source() const { return source_; }
    /// Message without the location prefix.
    const std::string& message() const { return message_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
    std::string source_;
};

/// A parsed file; `graded` is set when any symbol carries a `grades` clause.
struct SystemFile {
    RewriteSystem system;
    std::optional<GradedSystem> graded;

    bool is_graded() const { return graded.has_value(); }
};

SystemFile parse_system(std::string_view text);
/// Reads and parses a file; ParseError messages are prefixed with the path.
SystemFile load_system(const std::filesystem::path& path);

/// Parses a single term against a signature. Undeclared lowercase identifiers are variables.
Term parse_term(const Signature& sig, std::string_view text);

/// Text that parse_system maps back to a structurally equal system.
std::string emit(const RewriteSystem& sys);
std::string emit(const GradedSystem& g);

bool structurally_equal(const RewriteSystem& a, const RewriteSystem& b);
bool structurally_equal(const GradedSystem& a, const GradedSystem& b);

}  // namespace qrw::dsl
