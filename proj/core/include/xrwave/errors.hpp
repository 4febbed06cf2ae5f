#ifndef XRWAVE_ERRORS_HPP
#define XRWAVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace xrwave {

// Every failure carries a short machine-checkable tag (e.g. "OddLength",
// "BadRatios") plus a human-readable message. The CLI prints both.
class Error : public std::runtime_error {
public:
    Error(std::string tag, const std::string& msg)
        : std::runtime_error(tag + ": " + msg), tag_(std::move(tag)) {}

    const std::string& tag() const noexcept { return tag_; }

private:
    std::string tag_;
};

} // namespace xrwave

#endif
