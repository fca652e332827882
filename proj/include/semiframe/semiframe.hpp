#pragma once

#include "semiframe/errors.hpp"
#include "semiframe/spaces.hpp"
#include "semiframe/frames.hpp"
#include "semiframe/uncertainty.hpp"
#include "semiframe/generators.hpp"
#include "semiframe/extremal.hpp"
#include "semiframe/io.hpp"
