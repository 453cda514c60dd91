#pragma once

#include "ssg/bounds.hpp"
#include "ssg/distribution_io.hpp"
#include "ssg/erm.hpp"
#include "ssg/errors.hpp"
#include "ssg/experiments.hpp"
#include "ssg/hypothesis.hpp"
#include "ssg/mechanisms.hpp"
#include "ssg/model.hpp"
#include "ssg/optimum.hpp"
#include "ssg/parallel.hpp"
#include "ssg/report.hpp"
#include "ssg/rng.hpp"
#include "ssg/sample_io.hpp"
#include "ssg/split_sample.hpp"
#include "ssg/true_revenue.hpp"
