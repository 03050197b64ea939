#pragma once

#include "chernslope/errors.hpp"
#include "chernslope/exact.hpp"
#include "chernslope/primes.hpp"
#include "chernslope/numtheory.hpp"
#include "chernslope/girstmair.hpp"
#include "chernslope/geometry.hpp"
#include "chernslope/rootcover.hpp"
#include "chernslope/partitions.hpp"
#include "chernslope/density.hpp"
#include "chernslope/prank.hpp"
#include "chernslope/nefcheck.hpp"
#include "chernslope/serialize.hpp"
#include "chernslope/pipeline.hpp"
