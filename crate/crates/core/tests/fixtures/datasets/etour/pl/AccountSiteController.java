public class AccountSiteController {
    public void scheduleSite(Site site) {
        siteStore.schedule(site);
    }
    public void removeSite(Site site) {
        siteStore.remove(site);
    }
    public void findSite(Site site) {
        siteStore.find(site);
    }
    public void listSite(Site site) {
        siteStore.list(site);
    }
}
