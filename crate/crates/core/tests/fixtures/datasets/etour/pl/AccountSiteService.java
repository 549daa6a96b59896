public class AccountSiteService {
    public void approveSite(Site site) {
        siteStore.approve(site);
    }
    public void editSite(Site site) {
        siteStore.edit(site);
    }
    public void loadSite(Site site) {
        siteStore.load(site);
    }
}
