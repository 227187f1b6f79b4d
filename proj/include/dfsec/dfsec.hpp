#pragma once

#include "dfsec/allocator.hpp"
#include "dfsec/cone.hpp"
#include "dfsec/csv.hpp"
#include "dfsec/oracle.hpp"
#include "dfsec/public.hpp"
#include "dfsec/rates.hpp"
#include "dfsec/sampling.hpp"
#include "dfsec/scenario.hpp"
#include "dfsec/secret.hpp"
#include "dfsec/solution.hpp"
