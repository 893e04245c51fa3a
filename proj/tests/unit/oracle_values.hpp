#pragma once

// Frozen by tests/oracle/make_oracle.py (mpmath 40 digits; numpy/scipy Nystrom for determinants).

namespace oracle {

struct AiryCase { double x, ai, aip; };
struct HermiteCase { double beta; int n; double x, psi; };
struct AiryKernelCase { double x, y, k; };
struct MAlphaCase { double alpha, x, y, k; };
struct GueCase { int n; double x, y, k; };
struct MnsCase { double mu, particles, x, y, k; };
struct MnsMeanCase { double mu, particles, mean; };
struct BulkCase { double c, d, k; };
struct TracyWidomCase { double t, f; };
struct FAlphaCase { double alpha, t, f; };

inline constexpr double airy_first_zero = -2.338107410459767038489;
inline constexpr double gumbel_a100 = 1.6731948100792808603;
inline constexpr double gumbel_b100 = 0.23299530089232803765;
inline constexpr double logistic_2_5 = 0.99995460213129756561;

inline constexpr AiryCase airy_cases[] = {
    {-50, -0.16188142361232092392, 0.96898983727674908714},
    {-20, -0.17640612707798468959, 0.8928628567364712384},
    {-8.5, -0.33029023763020887902, -0.032313348284639135873},
    {-6, -0.32914517362982310523, 0.34593548728134289493},
    {-3, -0.37881429367765807435, 0.31458376921659881365},
    {-1, 0.5355608832923521188, -0.010160567116645209395},
    {0, 0.35502805388781723926, -0.25881940379280679841},
    {0.5, 0.23169360648083348977, -0.22491053266468389314},
    {1, 0.13529241631288141552, -0.15914744129679321279},
    {2.5, 0.015725923380470489995, -0.026250881035903230365},
    {5, 0.00010834442813607441735, -0.000247413890868462476},
    {6.4000000000000003553, 3.6177623188517996929e-6, -9.2886034448629746787e-6},
    {6.5999999999999996447, 2.1565999525969219821e-6, -5.6193194443457908719e-6},
    {10, 1.1047532552898685934e-10, -3.5206336767389236366e-10},
    {20, 1.6916728686705403136e-27, -7.5863916257483549605e-27},
    {50, 4.5849417240748284783e-104, -3.2443318198287992961e-103},
};

inline constexpr HermiteCase hermite_cases[] = {
    {1, 0, 0, 0.75112554446494248286},
    {1, 1, 0.2999999999999999889, 0.3046530516271036276},
    {1, 2, -1.1000000000000000888, 0.41184871645735941672},
    {1, 7, 0.9000000000000000222, 0.12789362577353575202},
    {1, 30, 2.5, -0.27662955450847443396},
    {1, 30, 9.0, 0.0056188772453574803941},
    {1, 100, 3.2999999999999998224, -0.15516042700936417925},
    {1, 100, 16.0, 0.000019811590026781078056},
    {1, 300, 7.7000000000000001776, -0.15971404727916470951},
    {1, 300, 29.5, 5.679646945028155154e-25},
    {2, 5, 0.4000000000000000222, 0.30578620413895214803},
    {0.5, 12, 3.0, 0.11573050388678359524},
    {3, 40, -1.6999999999999999556, 0.39764001195055431785},
};

inline constexpr AiryKernelCase airykernel_cases[] = {
    {0, 0, 0.066987483779663974144},
    {1, -0.5, 0.032066804151611696528},
    {-2, -2, 0.48567249353108431384},
    {3, 0.5, 0.00051109754926814724822},
    {-5, -4, 0.25433129908667349211},
};

inline constexpr MAlphaCase malpha_cases[] = {
    {1, 0, 0, 0.1688348645136035976},
    {1, 1, -0.5, 0.069318337750031527164},
    {1, -2, 1, -0.0034919559310876072364},
    {0.5, 0, 0, 0.24095999707772217533},
    {4, -1, 0, 0.14516850076770657716},
    {0.25, 3, 3, 0.20192927032753942475},
};

inline constexpr GueCase gue_cases[] = {
    {10, 0, 0, 1.3884353032620564874},
    {10, 1, -0.69999999999999995559, 0.17322340338183908317},
    {10, 3, 3, 0.99877192242132694621},
    {10, 4.5, 2, 0.037859972788333747364},
    {1, 0, 0, 0.56418958354775628695},
    {60, 0.2999999999999999889, -0.2000000000000000111, -0.46630555623297188742},
};

inline constexpr MnsCase mns_cases[] = {
    {0.10000000000000000555, 20, 0, 0, 7.9187865750785112102},
    {0.10000000000000000555, 20, 0.5, -0.2999999999999999889, 1.4626456471585254199e-6},
    {2.0, 10, 1.0, 0.2000000000000000111, -0.31108501284616921688},
    {0.050000000000000002776, 10, 0, 1, 2.6094249240435012812e-20},
};

inline constexpr MnsMeanCase mnsmean_cases[] = {
    {0.10000000000000000555, 20, 19.99951246054330445},
    {0.020000000000000000416, 50, 49.999806212308075581},
};

inline constexpr BulkCase bulk_cases[] = {
    {1, 0, 0.73152839048032882721},
    {1, 0.69999999999999995559, 0.094942523223868472292},
    {1, 1.5, -0.0040744427772537542861},
    {0.050000000000000002776, 0, 0.9989603128809019675},
    {0.050000000000000002776, 0.2999999999999999889, 0.85699280839262189459},
    {5, 2, 3.2974123187155979298e-10},
};

inline constexpr TracyWidomCase tracywidom_cases[] = {
    {-6, 1.0622546739515003165e-8},
    {-3, 0.080319552939338859088},
    {-2, 0.41322414250513839207},
    {-1, 0.80721424199929636689},
    {0, 0.96937282835526505931},
    {1, 0.99750543814938918974},
    {2, 0.99988755369830950581},
    {4, 0.99999995042087819197},
};

inline constexpr FAlphaCase falpha_cases[] = {
    {1.0, -2.0, 0.35925052259087303375},
    {1.0, 0.0, 0.79069009952867941315},
    {1.0, 1.5, 0.93932534090275077165},
};
} // namespace oracle
