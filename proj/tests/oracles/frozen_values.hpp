// Generated by tests/oracles/gen_frozen.py (mpmath, 50 digits). Do not edit.
#pragma once
#include <array>

namespace moe::oracle {

inline constexpr std::array<double, 4> kPoissonX{0.1, 1, 8.3333, 50};
// kPoissonTail[m - 1][i] = P(m, kPoissonX[i]) for m = 1..20
inline constexpr double kPoissonTail[20][4] = {
    {0.095162581964040426836, 0.6321205588285576784, 0.99975962251113106506, 1.0},
    {4.6788401604444695193e-3, 0.26424111765711535681, 0.9977564847831395695, 0.99999999999999999999},
    {1.546530702646716535e-4, 0.080301397071394196011, 0.98941011096880380455, 0.99999999999999999975},
    {3.8468339253450579774e-6, 0.018988156876153809079, 0.96622583199980239453, 0.99999999999999999573},
    {7.667801686189308923e-8, 3.6598468273437123455e-3, 0.917925444016707532, 0.9999999999999999455},
    {1.2748986922297914664e-9, 5.9418481758169299883e-4, 0.83742511938080264842, 0.99999999999999944322},
    {1.8180056068736503682e-11, 8.3241149288023107722e-5, 0.72561956016607162068, 0.99999999999999525757},
    {2.2693269500714707142e-13, 1.0249196674641694707e-5, 0.59251823636548332449, 0.99999999999996536003},
    {2.5186528355301137883e-15, 1.1252025979690180803e-6, 0.4538715786620530184, 0.99999999999977850043},
    {2.5163478067703147997e-17, 1.1142547833872067735e-7, 0.32549555725760904398, 0.99999999999874039154},
    {2.2858449307904159372e-19, 1.0047766375690937054e-8, 0.21851596734064374678, 0.99999999999354984708},
    {1.9036424006406264201e-21, 8.3161074268823339095e-10, 0.13747114764473039122, 0.99999999996995646318},
    {1.4635311653951692617e-23, 6.3597773271341418993e-11, 0.081190247980400827402, 0.9999999998716506969},
    {1.0448789251573317452e-25, 4.5198525469651134581e-12, 0.045112892505573323232, 0.99999999949355159584},
    {6.9629421976203564438e-28, 3.0000106665252020554e-13, 0.02363836204997474891, 0.99999999814319766349},
    {4.3502311222280518774e-30, 1.8677634631680655377e-14, 0.011708115073598775618, 0.99999999364201788898},
    {2.5581193229254424288e-32, 1.0949201303781834912e-15, 5.4944696280841569776e-3, 0.99999997957583109365},
    {1.420759998497333889e-34, 6.0642806772155733195e-17, 2.4485771815484527709e-3, 0.99999993820469346032},
    {7.4757079748510513748e-37, 3.1829554607097466407e-18, 1.0384474301753425562e-3, 0.99999982328486670107},
    {3.7369603680093291842e-39, 1.5875276010732629572e-19, 4.1997194295862995867e-4, 0.99999952086426996619},
};

inline constexpr std::array<double, 3> kRatePowers{5.0, 20.0, 50.0};
// Ergodic rate (bit/s) at M = 10 / M = 1, theta 6, D 10, alpha 2, noise 1, B 1e6
inline constexpr std::array<double, 3> kDataRateM10{1.9600969247714697214e+6, 3.6387533701084307285e+6, 4.8859086937677506387e+6};
inline constexpr std::array<double, 3> kDataRateM1{3.4676024176387215573e+5, 9.7116538415881733752e+5, 1.6689183319992429732e+6};
// Outage probability at the same parameters, threshold 10 (linear)
inline constexpr std::array<double, 3> kOutageM10{0.99999936845239158716, 0.32549983646402833687, 2.3563754242865666867e-3};
inline constexpr std::array<double, 3> kOutageM1{0.99999999999999666176, 0.99975963052358048579, 0.9643260066527476024};

}  // namespace moe::oracle
