#pragma once

#include "sirseries/dtm.hpp"
#include "sirseries/errors.hpp"
#include "sirseries/io.hpp"
#include "sirseries/ladm.hpp"
#include "sirseries/model.hpp"
#include "sirseries/oracle.hpp"
#include "sirseries/report.hpp"
#include "sirseries/series.hpp"
