// Batch front-end: experiment orchestration and file emission.
// Exit-code contract: 0 all checks pass, 1 check failure, 2 usage or
// config error, 3 solver error.
#pragma once

#include <string>
#include <vector>

namespace wgf::cli {

int cmd_run(const std::string& config_path, const std::string& out_dir, long seed_override);
int cmd_sweep(const std::string& config_path, const std::string& out_dir, long seed_override);
int cmd_ineq(const std::string& config_path, const std::string& out_dir, long seed_override);
int cmd_reference(const std::string& config_path, const std::string& out_dir, long seed_override);
int cmd_compare(const std::string& config_path, const std::string& out_dir, long seed_override);

int dispatch(const std::vector<std::string>& args);

}  // namespace wgf::cli
