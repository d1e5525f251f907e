#pragma once

#include "octaframe/axis.hpp"
#include "octaframe/distance.hpp"
#include "octaframe/fem.hpp"
#include "octaframe/forms.hpp"
#include "octaframe/groups.hpp"
#include "octaframe/mesh.hpp"
#include "octaframe/quaternion.hpp"
#include "octaframe/random.hpp"
#include "octaframe/recover.hpp"
#include "octaframe/topology.hpp"
