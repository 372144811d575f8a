#pragma once

#include "knnreal/error.hpp"
#include "knnreal/rational.hpp"
#include "knnreal/op_counter.hpp"
#include "knnreal/graph.hpp"
#include "knnreal/points.hpp"
#include "knnreal/knn_oracle.hpp"
#include "knnreal/lambda_check.hpp"
#include "knnreal/line_realizer.hpp"
#include "knnreal/lp_feasibility.hpp"
#include "knnreal/generators.hpp"
#include "knnreal/balanced_cut.hpp"
#include "knnreal/approx_embedder.hpp"
#include "knnreal/io.hpp"
