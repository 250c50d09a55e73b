#pragma once

#include <spdlog/logger.h>

#include <memory>

namespace lexforge {

/// Process-wide stderr logger. Level comes from LEXFORGE_LOG
/// (error|warn|info|debug), default warn.
spdlog::logger& log();

} // namespace lexforge
