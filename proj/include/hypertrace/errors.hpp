#pragma once

#include <stdexcept>
#include <string>

namespace hypertrace {

// Thrown when a computation would exceed a configured resource cap. The
// prediction is made before enumeration starts, never discovered mid-run.
class resource_limit_error : public std::runtime_error {
public:
    resource_limit_error(std::string cap_name, std::string cap_value,
                         std::string predicted)
        : std::runtime_error("resource cap '" + cap_name + "' exceeded: predicted cost " +
                             predicted + " > cap " + cap_value),
          cap_name_(std::move(cap_name)),
          cap_value_(std::move(cap_value)),
          predicted_(std::move(predicted)) {}

    const std::string& cap_name() const { return cap_name_; }
    const std::string& cap_value() const { return cap_value_; }
    const std::string& predicted() const { return predicted_; }

private:
    std::string cap_name_;
    std::string cap_value_;
    std::string predicted_;
};

} // namespace hypertrace
