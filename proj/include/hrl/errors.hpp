#pragma once

#include <stdexcept>
#include <string>

namespace hrl {

struct shape_error : std::runtime_error {
    explicit shape_error(const std::string& what) : std::runtime_error(what) {}
};

struct precondition_error : std::runtime_error {
    explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// replay memory empty, agent cannot train yet
struct not_ready_error : std::runtime_error {
    explicit not_ready_error(const std::string& what) : std::runtime_error(what) {}
};

struct divergence_error : std::runtime_error {
    explicit divergence_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hrl
