#pragma once

#include "docstat/bernoulli.hpp"
#include "docstat/catalog.hpp"
#include "docstat/csv.hpp"
#include "docstat/errors.hpp"
#include "docstat/evaluation.hpp"
#include "docstat/harness.hpp"
#include "docstat/matrix.hpp"
#include "docstat/pca.hpp"
#include "docstat/redundancy.hpp"
#include "docstat/subprocess.hpp"
#include "docstat/synth.hpp"
