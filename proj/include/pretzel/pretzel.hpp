#pragma once

#include <pretzel/params.hpp>
#include <pretzel/exact.hpp>
#include <pretzel/plumbing.hpp>
#include <pretzel/fibered.hpp>
#include <pretzel/lattice.hpp>
#include <pretzel/classifier.hpp>
#include <pretzel/cache.hpp>
#include <pretzel/record.hpp>
