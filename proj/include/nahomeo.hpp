#pragma once

#include "nahomeo/error.hpp"
#include "nahomeo/norm.hpp"
#include "nahomeo/padic.hpp"
#include "nahomeo/seq.hpp"
#include "nahomeo/membership.hpp"
#include "nahomeo/metric.hpp"
#include "nahomeo/sampling.hpp"
#include "nahomeo/ball.hpp"
#include "nahomeo/lemma6.hpp"
#include "nahomeo/extension.hpp"
#include "nahomeo/catalog.hpp"
#include "nahomeo/isotopy.hpp"
#include "nahomeo/push.hpp"
#include "nahomeo/chain.hpp"
#include "nahomeo/serialize.hpp"
#include "nahomeo/harness.hpp"
