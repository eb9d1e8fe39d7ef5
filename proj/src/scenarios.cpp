#include "mpemba/types.hpp"
