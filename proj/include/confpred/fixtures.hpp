#pragma once

#include <string>

#include "confpred/dataset.hpp"

namespace confpred {

// Bundled study data, embedded so the CLI replication commands work without
// any files on disk.  The same text is shipped under data/ for direct use.
const std::string& czuber_csv();
const std::string& czuber_meta();
const std::string& iris25_csv();
const std::string& iris25_meta();

Dataset fixture_czuber();
Dataset fixture_iris25();

}  // namespace confpred
