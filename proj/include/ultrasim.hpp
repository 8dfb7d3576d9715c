#pragma once

// Umbrella header for the ultrasim library.

#include "ultrasim/certificate.hpp"
#include "ultrasim/decision.hpp"
#include "ultrasim/error.hpp"
#include "ultrasim/io.hpp"
#include "ultrasim/mapping.hpp"
#include "ultrasim/orders.hpp"
#include "ultrasim/rational.hpp"
#include "ultrasim/relation.hpp"
#include "ultrasim/similarity.hpp"
