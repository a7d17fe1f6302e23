#pragma once

#include <vector>

namespace testutil {

// Survey corpus: vendor detection names as they appear in the wild, spacing
// typos, stray extensions and all, tagged with the coarse category their
// feed assigned. The parser must produce a family for every one of them.
struct CorpusRow {
  const char* category;  // "trojan" / "worm" / "botnet"
  const char* name;
};

inline const std::vector<CorpusRow>& caro_corpus() {
  static const std::vector<CorpusRow> rows = {
      {"trojan", "Trojan-Spy.Win32.Zbot.wijf"},
      {"trojan", "Trojan.GenericKD.3015891"},
      {"trojan", "Trojan.GenericKD.3015909"},
      {"trojan", "Trojan/Win32.Yakes"},
      {"trojan", "Trojan.GenericKD.3016131"},
      {"trojan", "Trojan/W32.KRBanker"},
      {"trojan", "Trojan-Spy.Win32.FlyStudio.ij"},
      {"trojan", "Trojan-Dropper.Win32.Injector.nyds"},
      {"trojan", "Trojan.Zboter"},
      {"trojan", "Trojan-Spy.Win32.Recam.yue"},
      {"trojan", "Trojan. Tesla!1.A322"},
      {"trojan", "Trojan.Win32.WaldeK.cbp"},
      {"trojan", "Trojan.Win32.WaldeK.cbm"},
      {"trojan", "Trojan.Win32.Dridex.v"},
      {"trojan", "Trojan.Win32.Tepfer.psxezj"},
      {"trojan", "Trojan.Win32.Yakes.owmp"},
      {"trojan", "Trojan.Win32.KeyLogger.auqd"},
      {"trojan", "Trojan.GenericKD.3023498"},
      {"trojan", "Trojan.Generic.8742442"},
      {"trojan", "Trojan.Generic.7738292"},
      {"trojan", "Trojan.Generic. AAA._xeDropperSpywareTrojan"},
      {"trojan", "Trojan.Generic .Badi"},
      {"trojan", "Trojan.Win32.CretClient.exe"},
      {"trojan", "Trojan.Generic .InstallBC201401"},
      {"trojan", "Trojan.Generic.pony"},
      {"trojan", "Trojan.Generic.Potao_Droppers wdecoy"},
      {"trojan", "Trojan.Win32.zeus"},
      {"trojan", "Trojan.Generic.kotbjfkzeq"},
      {"trojan", "Trojan.Generic.Locky"},
      {"trojan", "Trojan. Win32.njRAT.exe"},
      {"trojan", "Trojan.Generic.pafish"},
      {"trojan", "Trojan.Win32win32.duqu"},
      {"trojan", "Trojan.Generic.Cerber.exe"},
      {"trojan", "Trojan. Win32Mole.exe"},
      {"trojan", "Trojan. Win32.Spora.exe"},
      {"trojan", "Trojan.Win32GrandCrab-01.exe"},
      {"trojan", "Trojan. Win32.Delf.xo"},
      {"trojan", "Trojan. Win32.DarkTequila.exe"},
      {"trojan", "Trojan. Win32.psiphon.exe"},
      {"trojan", "Trojan.Generic.yigzwl"},
      {"trojan", "Trojan.Generic.Vcffipzmnipbxzdl"},
      {"worm", "Win32.Gamarue"},
      {"worm", "W32.Cridex.A.worm"},
      {"worm", "Worm.VBS.Agent"},
      {"worm", "Worm.Win32.3DStars"},
      {"worm", "Worm.Generic3.PEM"},
      {"worm", "Worm.Win32.Mira.A"},
      {"worm", "Worm.Generic2.CMVO"},
      {"worm", "Worm.Win32.Cake"},
      {"worm", "Worm.Win32.Fever"},
      {"worm", "Worm.Win32.Monkey.exe"},
      {"worm", "Worm.Win32.Mydoom.a.exe"},
      {"worm", "Worm.Win32.Pikachu.exe"},
      {"worm", "Worm.Win32.Postman.exe"},
      {"worm", "Worm.Win32.Sharpei.a.exe"},
      {"worm", "Worm.Win32.Silver.exe"},
      {"worm", "Worm.Win32.Sobig.exe"},
      {"worm", "Worm.KOOBFCE.SMC"},
      {"worm", "W32/Wabot"},
      {"worm", "Worm.vid.exe"},
      {"worm", "Email-Worm.Win32.Mydoom.l"},
      {"worm", "Email-Worm.Win32.Naked"},
      {"worm", "Worm.Christmas-wishes.doc"},
      {"worm", "Win32.WannaCry.EXE"},
      {"worm", "Win32.F7F105F9.exe"},
      {"worm", "Win32.2tetup.exe"},
      {"worm", "Win32.GrandCrab-01.exe"},
      {"worm", "Win32.GlobeImposter.exe"},
      {"botnet", "Win32.Lolbot.aoi"},
      {"botnet", "WORM/IrcBot.tlq"},
      {"botnet", "W32.Jorik_Lolbot.O!tr"},
      {"botnet", "Win32.SdBot.aamk"},
      {"botnet", "W32.ZBot.42352"},
      {"botnet", "Win32.Jorik.SdBot.e"},
      {"botnet", "MSIL.NanoBot.ibh"},
      {"botnet", "Win32.Zbot.vtii"},
      {"botnet", "Win32.Ngrbot.anak"},
      {"botnet", "Win32.Alinaos.G"},
      {"botnet", "GenericKD.2143403"},
      {"botnet", "Win32/ChkBot.A"},
      {"botnet", "MSIL/Lizarbot.A"},
      {"botnet", "Win32.Jorik.Lolbot.f"},
      {"botnet", "Win32.Zbot.sbdj"},
      {"botnet", "MSIL.NanoBot.bi"},
      {"botnet", "Win32.Ngrbot.uyk"},
      {"botnet", "Win32.Boht.qo"},
      {"botnet", "W32/Zbot.AJU!tr"},
      {"botnet", "Win32.VBInject"},
      {"botnet", "Trickbot"},
      {"botnet", "obfuscated.js"},
  };
  return rows;
}

}  // namespace testutil
