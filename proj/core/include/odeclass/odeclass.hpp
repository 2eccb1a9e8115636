#pragma once

#include "odeclass/classifier.hpp"
#include "odeclass/dopri5.hpp"
#include "odeclass/exact_pair.hpp"
#include "odeclass/forcing.hpp"
#include "odeclass/functionals.hpp"
#include "odeclass/identities.hpp"
#include "odeclass/kernel.hpp"
#include "odeclass/quadrature.hpp"
#include "odeclass/series.hpp"
#include "odeclass/trajectory.hpp"
#include "odeclass/random_forcing.hpp"
