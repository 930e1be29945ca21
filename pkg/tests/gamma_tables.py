# Integer coefficients of the scaled piece polynomials, ascending degree.
# SCALED_PIECES[(k, j)] = coefficients of (k^2-1)! * p_{k,j}(c) on [j, j+1].
SCALED_PIECES = {
    (2, 0): [0, 0, 0, 1],
    (2, 1): [8, -12, 6, -1],
    (3, 0): [0, 0, 0, 0, 0, 0, 0, 0, 1],
    (3, 1): [-927, 4392, -8484, 8568, -4830, 1512, -252, 24, -2],
    (3, 2): [6561, -17496, 20412, -13608, 5670, -1512, 252, -24, 1],
    (4, 0): [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    (4, 1): [292464, -2910240, 13131720, -35497280, 63969360, -80912832, 73653580, -48674340, 23268960, -7927920, 1873872, -294840, 29120, -1680, 60, -3],
    (4, 2): [-705916304, 3031004640, -5910494520, 6950332480, -5531176560, 3179336160, -1381480100, 470398500, -128700000, 28428400, -4948944, 644280, -58240, 3360, -120, 3],
    (4, 3): [1073741824, -4026531840, 7046430720, -7633633280, 5725224960, -3148873728, 1312030720, -421724160, 105431040, -20500480, 3075072, -349440, 29120, -1680, 60, -1],
    (5, 0): [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    (5, 1): [-179192775, 3065085000, -24758793900, 125530048600, -447845361810, 1194550480200, -2470634081300, 4055447662200, -5363308269495, 5768661885360, -5072249298600, 3651921075600, -2149736416100, 1029946456560, -398517412920, 123134189200, -29915282925, 5598232200, -785367660, 79695000, -5578650, 253000, -6900, 120, -4],
    (5, 2): [2443806916000825, -17407730744067000, 58223870087874900, -121528934511474600, 177464649282553710, -192656070655587000, 161304132700472300, -106665764409131400, 56603181050415945, -24367026171730000, 8573537591434200, -2479096272534000, 592028782736300, -117507788504400, 19589544660840, -2790376974000, 347123925225, -38235839400, 3673797820, -292215000, 17798550, -759000, 20700, -360, 6],
    (5, 3): [-59394510856327775, 295689680026989000, -706068990841773900, 1078975874367012600, -1187187920423969310, 1002229415508043800, -674525363862958300, 370693368908418600, -168820549421134545, 64263112978594640, -20539021982760600, 5522495132708400, -1250073382257700, 238359873297840, -38343917872920, 5220961534800, -604502001675, 59676982200, -4991492660, 345345000, -18861150, 759000, -20700, 360, -4],
    (5, 4): [59604644775390625, -286102294921875000, 658035278320312500, -965118408203125000, 1013374328613281250, -810699462890625000, 513442993164062500, -264056396484375000, 112223968505859375, -39901855468750000, 11970556640625000, -3047050781250000, 660194335937500, -121882031250000, 19152890625000, -2553718750000, 287293359375, -27039375000, 2103062500, -132825000, 6641250, -253000, 6900, -120, 1],
    (6, 0): [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    (6, 1): [181451828088, -4757721939180, 60083734292610, -486611119673910, 2839179794146080, -12709759385961792, 45395326648924560, -132818300667235920, 324322366699605120, -670007069282572560, 1182907170763213896, -1798264701411305400, 2366932574161864800, -2707997790067516800, 2699953776702032400, -2349159980084905680, 1784232273468783600, -1182119446613536200, 682008750903872700, -341689133815514100, 148080133608311520, -55229306110228800, 17613096754503600, -4764220775823600, 1082230579684800, -203947162827408, 31410293440680, -3881009646360, 375954464160, -27736558080, 1501747632, -56862960, 1413720, -21420, 210, -5],
    (6, 2): [-120657836168926671721608, 1317633501288006725436180, -6898544814307888233994110, 23052485974924851589246410, -55222971916535322127277280, 100980418141793007531096768, -146552294343347207749027440, 173284197564689124463669680, -170046927222112798851396480, 140369638227928515300288240, -98447935269887910573290424, 59100950810144250579990600, -30536223709478278133815200, 13632520546818627517123200, -5272695333575690900655600, 1769595318452023551221040, -515683796529615245254800, 130462364245768533732600, -28627456041998656712100, 5440022414523749814300, -893399034384858022560, 126507768912420350400, -15414821245929142800, 1615205663712622800, -145954772087342400, 11485501718811120, -802885194480600, 51174168784200, -3010298623200, 158939827200, -7029581328, 238447440, -5654880, 85680, -840, 10],
}
