#pragma once

#include "momentous/errors.hpp"
#include "momentous/params.hpp"
#include "momentous/frame.hpp"
#include "momentous/transform.hpp"
#include "momentous/model_system.hpp"
#include "momentous/moment_algebra.hpp"
#include "momentous/dynamics.hpp"
#include "momentous/integrator.hpp"
#include "momentous/table.hpp"
#include "momentous/diagnostics.hpp"
#include "momentous/published_brackets.hpp"
