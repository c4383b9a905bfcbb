#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace ccsim {

enum class Role : std::uint8_t { Escrow, Customer, Validator, TransactionManager };

/// Network-unique participant identity. Escrows are e_0..e_{n-1}, customers
/// c_0..c_n (c_0 pays, c_n is paid, the rest connect), validators v_0..v_{m-1},
/// plus the transaction-manager front identity.
struct ParticipantId {
    Role role = Role::Customer;
    int index = 0;

    static ParticipantId escrow(int i) { return {Role::Escrow, i}; }
    static ParticipantId customer(int i) { return {Role::Customer, i}; }
    static ParticipantId validator(int i) { return {Role::Validator, i}; }
    static ParticipantId tm() { return {Role::TransactionManager, 0}; }

    friend auto operator<=>(const ParticipantId&, const ParticipantId&) = default;

    std::string str() const {
        switch (role) {
            case Role::Escrow: return "e_" + std::to_string(index);
            case Role::Customer: return "c_" + std::to_string(index);
            case Role::Validator: return "v_" + std::to_string(index);
            case Role::TransactionManager: return "TM";
        }
        return "?";
    }

    /// Inverse of str(); rejects anything else.
    static std::optional<ParticipantId> parse(const std::string& s) {
        if (s == "TM")
            return tm();
        if (s.size() < 3 || s[1] != '_')
            return std::nullopt;
        Role r;
        switch (s[0]) {
            case 'e': r = Role::Escrow; break;
            case 'c': r = Role::Customer; break;
            case 'v': r = Role::Validator; break;
            default: return std::nullopt;
        }
        try {
            size_t pos = 0;
            int idx = std::stoi(s.substr(2), &pos);
            if (pos != s.size() - 2 || idx < 0)
                return std::nullopt;
            return ParticipantId{r, idx};
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }
};

}  // namespace ccsim
