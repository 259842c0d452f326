#pragma once

#include "bredonk/errors.hpp"
#include "bredonk/exactla.hpp"
#include "bredonk/cyclotomic.hpp"
#include "bredonk/groups.hpp"
#include "bredonk/characters.hpp"
#include "bredonk/arrangement.hpp"
#include "bredonk/blowup.hpp"
#include "bredonk/bredon.hpp"
#include "bredonk/crossed.hpp"
#include "bredonk/ktheory.hpp"
#include "bredonk/scenario.hpp"
#include "bredonk/presets.hpp"
#include "bredonk/pipeline.hpp"
