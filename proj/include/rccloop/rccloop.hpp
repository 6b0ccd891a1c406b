#pragma once

#include "rccloop/brute.hpp"
#include "rccloop/constructions.hpp"
#include "rccloop/contexts.hpp"
#include "rccloop/counting.hpp"
#include "rccloop/errors.hpp"
#include "rccloop/field.hpp"
#include "rccloop/folder.hpp"
#include "rccloop/gl2.hpp"
#include "rccloop/group.hpp"
#include "rccloop/io.hpp"
#include "rccloop/loop.hpp"
#include "rccloop/perm.hpp"
#include "rccloop/verify.hpp"
