#ifndef SKEWSPEC_VERSION_HPP
#define SKEWSPEC_VERSION_HPP

#define SKEWSPEC_VERSION "0.1.0"

#endif
