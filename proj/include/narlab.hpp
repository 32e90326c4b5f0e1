#pragma once

#include "narlab/error.hpp"
#include "narlab/matrix.hpp"
#include "narlab/random.hpp"
#include "narlab/graph.hpp"
#include "narlab/json_io.hpp"
#include "narlab/tropical.hpp"
#include "narlab/trajectory.hpp"
#include "narlab/executors.hpp"
#include "narlab/wl.hpp"
#include "narlab/maxflow.hpp"
#include "narlab/closed_form.hpp"
#include "narlab/astar.hpp"
#include "narlab/tsp.hpp"
#include "narlab/kcenter.hpp"
#include "narlab/dataset.hpp"
#include "narlab/verify.hpp"
