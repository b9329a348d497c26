#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rcp/errors.hpp"

namespace rcp {

// Dense handle for a string variable. Ordering follows declaration order.
struct VarId {
    uint32_t value = 0;
    friend auto operator<=>(const VarId&, const VarId&) = default;
};

// Name table shared by sequents, proof trees and models.
class VarTable {
public:
    VarId intern(const std::string& name) {
        auto it = by_name_.find(name);
        if (it != by_name_.end()) return it->second;
        VarId id{static_cast<uint32_t>(names_.size())};
        names_.push_back(name);
        by_name_.emplace(name, id);
        return id;
    }

    bool known(const std::string& name) const { return by_name_.count(name) > 0; }

    VarId lookup(const std::string& name) const {
        auto it = by_name_.find(name);
        if (it == by_name_.end()) throw Error("unknown variable: " + name);
        return it->second;
    }

    const std::string& name(VarId id) const { return names_.at(id.value); }
    size_t size() const { return names_.size(); }

private:
    std::vector<std::string> names_;
    std::map<std::string, VarId> by_name_;
};

} // namespace rcp
