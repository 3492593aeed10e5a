#pragma once

#include "catana/core/date.hpp"
#include "catana/core/embedding_container.hpp"
#include "catana/core/error.hpp"
#include "catana/core/json_io.hpp"
#include "catana/core/popularity.hpp"
#include "catana/core/types.hpp"

#include "catana/cluster/dbscan.hpp"
#include "catana/cluster/distance.hpp"
#include "catana/cluster/hdbscan.hpp"
#include "catana/cluster/result.hpp"
